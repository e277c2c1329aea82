//! Environments: square-type grids, scalar-field grids, and structures.
//!
//! Scalar fields obey `value = max(0, source - decay * z)` per placed
//! instance, where `z` is Manhattan distance to a point source or to a grid
//! edge (the row or column adjacent to an edge has `z = 0`). The value of a
//! field-quantity at a square is the sum over all instances based on it,
//! including one `s_robot` point instance per robot position.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grid::{Direction, GridCoord};
use crate::rational::Rational;

/// Reserved square-type marking structure cells.
pub const E_X: &str = "e_X";
/// Reserved square-type sensed at robot-occupied squares.
pub const E_ROBOT: &str = "e_robot";
/// Field-quantity of the reserved structure point-field `s_X`.
pub const FQ_X: &str = "fq_X";
/// Field-quantity radiated by every robot.
pub const FQ_ROBOT: &str = "fq_robot";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnvError {
    #[error("square ({col}, {row}) outside {width}x{height} grid")]
    OutOfBounds {
        col: u32,
        row: u32,
        width: u32,
        height: u32,
    },
    #[error("square ({col}, {row}) already holds a point-field")]
    DuplicatePointField { col: u32, row: u32 },
    #[error("square-type {0:?} is not in the environment's type set")]
    UnknownSquareType(String),
    #[error("field spec for {quantity:?} is not in the environment's field set")]
    UnknownFieldSpec { quantity: String },
    #[error("{0:?} placed as a point-field but has edge kind")]
    EdgeSpecAtSquare(String),
    #[error("{0:?} placed on a grid edge but has point kind")]
    PointSpecAtEdge(String),
    #[error("grid must be at least 1x1")]
    EmptyGrid,
    #[error("reserved member {0:?} is missing from the set")]
    MissingReserved(String),
    #[error("type map holds {found} entries for a {width}x{height} grid")]
    WrongTypeMapSize { found: usize, width: u32, height: u32 },
}

/// Named square-type drawn from an environment's type set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SquareType(pub String);

impl SquareType {
    pub fn new(name: impl Into<String>) -> SquareType {
        SquareType(name.into())
    }

    pub fn structure() -> SquareType {
        SquareType::new(E_X)
    }

    pub fn robot() -> SquareType {
        SquareType::new(E_ROBOT)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for SquareType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Whether a field radiates from a square or from a grid edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Point,
    Edge,
}

/// Scalar-field spec: a named quantity with source value and linear decay.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct FieldSpec {
    pub quantity: String,
    pub kind: FieldKind,
    pub source: Rational,
    pub decay: Rational,
}

impl FieldSpec {
    pub fn point(quantity: impl Into<String>, source: Rational, decay: Rational) -> FieldSpec {
        FieldSpec {
            quantity: quantity.into(),
            kind: FieldKind::Point,
            source,
            decay,
        }
    }

    pub fn edge(quantity: impl Into<String>, source: Rational, decay: Rational) -> FieldSpec {
        FieldSpec {
            quantity: quantity.into(),
            kind: FieldKind::Edge,
            source,
            decay,
        }
    }

    /// Reserved structure marker: point-field, source 1, decay 1/2.
    pub fn s_x() -> FieldSpec {
        FieldSpec::point(FQ_X, Rational::ONE, Rational::new(1, 2))
    }

    /// Reserved robot field: point-field, source 1, decay 1/2.
    pub fn s_robot() -> FieldSpec {
        FieldSpec::point(FQ_ROBOT, Rational::ONE, Rational::new(1, 2))
    }

    /// Contribution of one instance at Manhattan distance `z`.
    pub fn value_at_distance(&self, z: u32) -> Rational {
        (self.source - self.decay * Rational::from_int(z as i64)).clamp_non_negative()
    }
}

/// Square-type environment: every square carries a type from the type set.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EnvironmentSt {
    width: u32,
    height: u32,
    /// Row-major from the southwest corner.
    types: Vec<SquareType>,
    type_set: Vec<SquareType>,
}

impl EnvironmentSt {
    /// Uniform grid of `fill`; the reserved types `e_X` and `e_robot` are
    /// added to the type set when missing.
    pub fn filled(width: u32, height: u32, fill: SquareType, type_set: Vec<SquareType>) -> EnvironmentSt {
        assert!(width >= 1 && height >= 1, "grid must be non-empty");
        let mut type_set = type_set;
        for reserved in [SquareType::structure(), SquareType::robot()] {
            if !type_set.contains(&reserved) {
                type_set.push(reserved);
            }
        }
        if !type_set.contains(&fill) {
            type_set.insert(0, fill.clone());
        }
        EnvironmentSt {
            width,
            height,
            types: vec![fill; (width * height) as usize],
            type_set,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn type_set(&self) -> &[SquareType] {
        &self.type_set
    }

    /// Types a robot may write or an environment designer may place;
    /// excludes `e_robot`, which only ever marks a robot's position.
    pub fn placeable_types(&self) -> impl Iterator<Item = &SquareType> {
        self.type_set.iter().filter(|t| t.name() != E_ROBOT)
    }

    pub fn in_bounds(&self, p: GridCoord) -> bool {
        (1..=self.width).contains(&p.col) && (1..=self.height).contains(&p.row)
    }

    fn index(&self, p: GridCoord) -> usize {
        debug_assert!(self.in_bounds(p));
        ((p.row - 1) * self.width + (p.col - 1)) as usize
    }

    pub fn type_at(&self, p: GridCoord) -> &SquareType {
        &self.types[self.index(p)]
    }

    pub fn set_type(&mut self, p: GridCoord, t: SquareType) -> Result<(), EnvError> {
        if !self.in_bounds(p) {
            return Err(EnvError::OutOfBounds {
                col: p.col,
                row: p.row,
                width: self.width,
                height: self.height,
            });
        }
        if !self.type_set.contains(&t) {
            return Err(EnvError::UnknownSquareType(t.0));
        }
        let idx = self.index(p);
        self.types[idx] = t;
        Ok(())
    }

    pub fn squares(&self) -> impl Iterator<Item = GridCoord> {
        squares(self.width, self.height)
    }

    /// Integrity check for maps assembled outside the constructors
    /// (deserialization bypasses the placement guards).
    pub fn validate(&self) -> Result<(), EnvError> {
        if self.width < 1 || self.height < 1 {
            return Err(EnvError::EmptyGrid);
        }
        if self.types.len() != (self.width * self.height) as usize {
            return Err(EnvError::WrongTypeMapSize {
                found: self.types.len(),
                width: self.width,
                height: self.height,
            });
        }
        for reserved in [SquareType::structure(), SquareType::robot()] {
            if !self.type_set.contains(&reserved) {
                return Err(EnvError::MissingReserved(reserved.0));
            }
        }
        for t in &self.types {
            if !self.type_set.contains(t) {
                return Err(EnvError::UnknownSquareType(t.0.clone()));
            }
        }
        Ok(())
    }
}

/// Scalar-field environment: at most one point-field per square, any number
/// of edge-fields per grid edge.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EnvironmentSf {
    width: u32,
    height: u32,
    /// Serialized as a row-major list of `{at, field}` entries; a repeated
    /// square is rejected at parse time.
    #[serde(with = "point_fields_serde")]
    point_fields: BTreeMap<GridCoord, FieldSpec>,
    edge_fields: BTreeMap<Direction, Vec<FieldSpec>>,
    field_set: Vec<FieldSpec>,
}

mod point_fields_serde {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::FieldSpec;
    use crate::grid::GridCoord;

    #[derive(Serialize)]
    struct EntryRef<'a> {
        at: GridCoord,
        field: &'a FieldSpec,
    }

    #[derive(Deserialize)]
    struct Entry {
        at: GridCoord,
        field: FieldSpec,
    }

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<GridCoord, FieldSpec>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(map.len()))?;
        for (&at, field) in map {
            seq.serialize_element(&EntryRef { at, field })?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<GridCoord, FieldSpec>, D::Error> {
        let mut map = BTreeMap::new();
        for e in Vec::<Entry>::deserialize(de)? {
            let at = e.at;
            if map.insert(at, e.field).is_some() {
                return Err(D::Error::custom(format!(
                    "two point-fields on square ({}, {})",
                    at.col, at.row
                )));
            }
        }
        Ok(map)
    }
}

impl EnvironmentSf {
    /// Empty grid over `field_set`; the reserved specs `s_X` and `s_robot`
    /// are added when missing.
    pub fn empty(width: u32, height: u32, field_set: Vec<FieldSpec>) -> EnvironmentSf {
        assert!(width >= 1 && height >= 1, "grid must be non-empty");
        let mut field_set = field_set;
        for reserved in [FieldSpec::s_x(), FieldSpec::s_robot()] {
            if !field_set.contains(&reserved) {
                field_set.push(reserved);
            }
        }
        EnvironmentSf {
            width,
            height,
            point_fields: BTreeMap::new(),
            edge_fields: BTreeMap::new(),
            field_set,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn field_set(&self) -> &[FieldSpec] {
        &self.field_set
    }

    /// Point specs an environment designer may pre-place; excludes the
    /// reserved `s_X` (structures must be built, not given) and `s_robot`.
    pub fn placeable_point_specs(&self) -> impl Iterator<Item = &FieldSpec> {
        self.field_set.iter().filter(|s| {
            s.kind == FieldKind::Point && s.quantity != FQ_X && s.quantity != FQ_ROBOT
        })
    }

    pub fn edge_specs(&self) -> impl Iterator<Item = &FieldSpec> {
        self.field_set.iter().filter(|s| s.kind == FieldKind::Edge)
    }

    pub fn in_bounds(&self, p: GridCoord) -> bool {
        (1..=self.width).contains(&p.col) && (1..=self.height).contains(&p.row)
    }

    pub fn point_fields(&self) -> &BTreeMap<GridCoord, FieldSpec> {
        &self.point_fields
    }

    pub fn edge_fields(&self) -> &BTreeMap<Direction, Vec<FieldSpec>> {
        &self.edge_fields
    }

    pub fn point_field_at(&self, p: GridCoord) -> Option<&FieldSpec> {
        self.point_fields.get(&p)
    }

    fn check_bounds(&self, p: GridCoord) -> Result<(), EnvError> {
        if self.in_bounds(p) {
            Ok(())
        } else {
            Err(EnvError::OutOfBounds {
                col: p.col,
                row: p.row,
                width: self.width,
                height: self.height,
            })
        }
    }

    fn check_in_set(&self, spec: &FieldSpec) -> Result<(), EnvError> {
        if self.field_set.contains(spec) {
            Ok(())
        } else {
            Err(EnvError::UnknownFieldSpec {
                quantity: spec.quantity.clone(),
            })
        }
    }

    /// Construction-time placement; rejects a second point-field on a square.
    pub fn add_point_field(&mut self, p: GridCoord, spec: FieldSpec) -> Result<(), EnvError> {
        self.check_bounds(p)?;
        self.check_in_set(&spec)?;
        if spec.kind != FieldKind::Point {
            return Err(EnvError::EdgeSpecAtSquare(spec.quantity));
        }
        if self.point_fields.contains_key(&p) {
            return Err(EnvError::DuplicatePointField { col: p.col, row: p.row });
        }
        self.point_fields.insert(p, spec);
        Ok(())
    }

    /// Robot-modification placement: adds a point-field or replaces the one
    /// already on the square, preserving the one-point-field invariant.
    pub fn overwrite_point_field(&mut self, p: GridCoord, spec: FieldSpec) -> Result<(), EnvError> {
        self.check_bounds(p)?;
        self.check_in_set(&spec)?;
        if spec.kind != FieldKind::Point {
            return Err(EnvError::EdgeSpecAtSquare(spec.quantity));
        }
        self.point_fields.insert(p, spec);
        Ok(())
    }

    pub fn remove_point_field(&mut self, p: GridCoord) -> Option<FieldSpec> {
        self.point_fields.remove(&p)
    }

    pub fn add_edge_field(&mut self, edge: Direction, spec: FieldSpec) -> Result<(), EnvError> {
        self.check_in_set(&spec)?;
        if spec.kind != FieldKind::Edge {
            return Err(EnvError::PointSpecAtEdge(spec.quantity));
        }
        self.edge_fields.entry(edge).or_default().push(spec);
        Ok(())
    }

    /// Manhattan distance from `p` to a grid edge; the line of squares
    /// adjacent to the edge is at distance zero.
    pub fn edge_distance(&self, edge: Direction, p: GridCoord) -> u32 {
        match edge {
            Direction::North => self.height - p.row,
            Direction::South => p.row - 1,
            Direction::East => self.width - p.col,
            Direction::West => p.col - 1,
        }
    }

    /// Exact value of `quantity` at `square`: the clamped sum over all placed
    /// instances plus one robot field per overlay position when the quantity
    /// is `fq_robot`. Unknown quantities read as zero.
    pub fn field_value(
        &self,
        robot_overlay: &[GridCoord],
        quantity: &str,
        square: GridCoord,
    ) -> Result<Rational, EnvError> {
        self.check_bounds(square)?;
        let mut total = Rational::ZERO;
        for (pos, spec) in &self.point_fields {
            if spec.quantity == quantity {
                total += spec.value_at_distance(square.manhattan(*pos));
            }
        }
        for (edge, specs) in &self.edge_fields {
            let z = self.edge_distance(*edge, square);
            for spec in specs {
                if spec.quantity == quantity {
                    total += spec.value_at_distance(z);
                }
            }
        }
        if quantity == FQ_ROBOT {
            let s_robot = FieldSpec::s_robot();
            for pos in robot_overlay {
                total += s_robot.value_at_distance(square.manhattan(*pos));
            }
        }
        Ok(total)
    }

    pub fn squares(&self) -> impl Iterator<Item = GridCoord> {
        squares(self.width, self.height)
    }

    /// Integrity check for maps assembled outside the constructors
    /// (deserialization bypasses the placement guards).
    pub fn validate(&self) -> Result<(), EnvError> {
        if self.width < 1 || self.height < 1 {
            return Err(EnvError::EmptyGrid);
        }
        for reserved in [FieldSpec::s_x(), FieldSpec::s_robot()] {
            if !self.field_set.contains(&reserved) {
                return Err(EnvError::MissingReserved(reserved.quantity));
            }
        }
        for (&p, spec) in &self.point_fields {
            self.check_bounds(p)?;
            self.check_in_set(spec)?;
            if spec.kind != FieldKind::Point {
                return Err(EnvError::EdgeSpecAtSquare(spec.quantity.clone()));
            }
        }
        for specs in self.edge_fields.values() {
            for spec in specs {
                self.check_in_set(spec)?;
                if spec.kind != FieldKind::Edge {
                    return Err(EnvError::PointSpecAtEdge(spec.quantity.clone()));
                }
            }
        }
        Ok(())
    }
}

/// Row-major iteration from the southwest corner.
pub fn squares(width: u32, height: u32) -> impl Iterator<Item = GridCoord> {
    (1..=height).flat_map(move |row| (1..=width).map(move |col| GridCoord::new(col, row)))
}

/// Either kind of environment; most of the engine is generic over this.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Environment {
    St(EnvironmentSt),
    Sf(EnvironmentSf),
}

impl Environment {
    pub fn width(&self) -> u32 {
        match self {
            Environment::St(e) => e.width(),
            Environment::Sf(e) => e.width(),
        }
    }

    pub fn height(&self) -> u32 {
        match self {
            Environment::St(e) => e.height(),
            Environment::Sf(e) => e.height(),
        }
    }

    pub fn in_bounds(&self, p: GridCoord) -> bool {
        match self {
            Environment::St(e) => e.in_bounds(p),
            Environment::Sf(e) => e.in_bounds(p),
        }
    }

    pub fn area(&self) -> u64 {
        self.width() as u64 * self.height() as u64
    }

    pub fn as_sf(&self) -> Option<&EnvironmentSf> {
        match self {
            Environment::Sf(e) => Some(e),
            Environment::St(_) => None,
        }
    }

    pub fn as_st(&self) -> Option<&EnvironmentSt> {
        match self {
            Environment::St(e) => Some(e),
            Environment::Sf(_) => None,
        }
    }

    pub fn as_sf_mut(&mut self) -> Option<&mut EnvironmentSf> {
        match self {
            Environment::Sf(e) => Some(e),
            Environment::St(_) => None,
        }
    }

    pub fn as_st_mut(&mut self) -> Option<&mut EnvironmentSt> {
        match self {
            Environment::St(e) => Some(e),
            Environment::Sf(_) => None,
        }
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        match self {
            Environment::St(e) => e.validate(),
            Environment::Sf(e) => e.validate(),
        }
    }
}

/// Sparse cell pattern anchored at its southwest corner.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Structure {
    /// `(dx, dy)` offsets from the anchor, sorted row-major.
    cells: Vec<(u32, u32)>,
}

impl Structure {
    pub fn new(mut cells: Vec<(u32, u32)>) -> Structure {
        assert!(!cells.is_empty(), "structure must have at least one cell");
        cells.sort_by_key(|&(dx, dy)| (dy, dx));
        cells.dedup();
        Structure { cells }
    }

    /// Single cell at the anchor itself.
    pub fn single() -> Structure {
        Structure::new(vec![(0, 0)])
    }

    /// East-west line of `len` cells starting at the anchor.
    pub fn east_west_line(len: u32) -> Structure {
        Structure::new((0..len).map(|dx| (dx, 0)).collect())
    }

    pub fn cells(&self) -> &[(u32, u32)] {
        &self.cells
    }

    pub fn translated(&self, p_x: GridCoord) -> impl Iterator<Item = Option<GridCoord>> + '_ {
        self.cells
            .iter()
            .map(move |&(dx, dy)| p_x.offset(dx as i32, dy as i32))
    }
}

/// True iff every structure cell, translated to `p_x`, holds the structure
/// marker: type `e_X` in square-type environments, a placed `s_X` point-field
/// in scalar-field environments. Extra markers elsewhere are ignored, and a
/// translated cell outside the grid means the structure cannot be present.
pub fn structure_present(env: &Environment, x: &Structure, p_x: GridCoord) -> bool {
    x.translated(p_x).all(|cell| match cell {
        None => false,
        Some(p) => match env {
            Environment::St(e) => e.in_bounds(p) && e.type_at(p).name() == E_X,
            Environment::Sf(e) => {
                e.in_bounds(p) && e.point_field_at(p) == Some(&FieldSpec::s_x())
            }
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn sf_env(width: u32, height: u32, specs: Vec<FieldSpec>) -> EnvironmentSf {
        EnvironmentSf::empty(width, height, specs)
    }

    #[test]
    fn reserved_members_added() {
        let st = EnvironmentSt::filled(2, 2, SquareType::new("e_B"), vec![]);
        assert!(st.type_set().contains(&SquareType::structure()));
        assert!(st.type_set().contains(&SquareType::robot()));

        let sf = sf_env(2, 2, vec![]);
        assert!(sf.field_set().contains(&FieldSpec::s_x()));
        assert!(sf.field_set().contains(&FieldSpec::s_robot()));
    }

    #[test]
    fn point_field_value_decays_and_clamps() {
        let spec = FieldSpec::point("fq", Rational::ONE, rat(2, 5));
        let mut env = sf_env(9, 9, vec![spec.clone()]);
        env.add_point_field(GridCoord::new(3, 3), spec).unwrap();
        let at = |c, r| env.field_value(&[], "fq", GridCoord::new(c, r)).unwrap();
        assert_eq!(at(3, 4), rat(3, 5));
        assert_eq!(at(3, 3), Rational::ONE);
        // Manhattan distance 10 from the source: clamped to zero, not -3.
        assert_eq!(at(9, 7), Rational::ZERO);
    }

    #[test]
    fn same_quantity_instances_sum() {
        let spec = FieldSpec::point("fq", Rational::ONE, rat(1, 2));
        let mut env = sf_env(3, 1, vec![spec.clone()]);
        env.add_point_field(GridCoord::new(1, 1), spec.clone()).unwrap();
        env.add_point_field(GridCoord::new(3, 1), spec).unwrap();
        assert_eq!(
            env.field_value(&[], "fq", GridCoord::new(2, 1)).unwrap(),
            Rational::ONE
        );
    }

    #[test]
    fn edge_field_distance_convention() {
        // Northern edge-field with source |V|+2 = 6 and decay 1 reads as the
        // row number on a height-6 grid.
        let spec = FieldSpec::edge("fq_L", Rational::from_int(6), Rational::ONE);
        let mut env = sf_env(3, 6, vec![spec.clone()]);
        env.add_edge_field(Direction::North, spec).unwrap();
        for row in 1..=6 {
            assert_eq!(
                env.field_value(&[], "fq_L", GridCoord::new(2, row)).unwrap(),
                Rational::from_int(row as i64)
            );
        }
    }

    #[test]
    fn robot_overlay_contributes_only_to_fq_robot() {
        let env = sf_env(3, 3, vec![]);
        let overlay = [GridCoord::new(2, 2)];
        assert_eq!(
            env.field_value(&overlay, FQ_ROBOT, GridCoord::new(2, 2)).unwrap(),
            Rational::ONE
        );
        assert_eq!(
            env.field_value(&overlay, FQ_ROBOT, GridCoord::new(3, 2)).unwrap(),
            rat(1, 2)
        );
        assert_eq!(
            env.field_value(&overlay, FQ_X, GridCoord::new(2, 2)).unwrap(),
            Rational::ZERO
        );
    }

    #[test]
    fn unknown_quantity_reads_zero() {
        let env = sf_env(2, 2, vec![]);
        assert_eq!(
            env.field_value(&[], "fq_nonesuch", GridCoord::new(1, 1)).unwrap(),
            Rational::ZERO
        );
    }

    #[test]
    fn out_of_bounds_query_errors() {
        let env = sf_env(2, 2, vec![]);
        assert!(env.field_value(&[], FQ_X, GridCoord::new(3, 1)).is_err());
    }

    #[test]
    fn one_point_field_per_square() {
        let spec = FieldSpec::point("fq", Rational::ONE, Rational::ONE);
        let mut env = sf_env(2, 1, vec![spec.clone()]);
        env.add_point_field(GridCoord::new(1, 1), spec.clone()).unwrap();
        assert_eq!(
            env.add_point_field(GridCoord::new(1, 1), spec.clone()),
            Err(EnvError::DuplicatePointField { col: 1, row: 1 })
        );
        // The robot-modification path replaces instead.
        env.overwrite_point_field(GridCoord::new(1, 1), spec).unwrap();
    }

    #[test]
    fn structure_presence() {
        let mut env = sf_env(3, 1, vec![]);
        let x = Structure::east_west_line(2);
        let p_x = GridCoord::new(1, 1);
        let wrapped = |e: &EnvironmentSf| Environment::Sf(e.clone());
        assert!(!structure_present(&wrapped(&env), &x, p_x));
        env.overwrite_point_field(GridCoord::new(1, 1), FieldSpec::s_x()).unwrap();
        env.overwrite_point_field(GridCoord::new(2, 1), FieldSpec::s_x()).unwrap();
        assert!(structure_present(&wrapped(&env), &x, p_x));
        // A robot field on a structure cell is not a structure marker.
        env.overwrite_point_field(GridCoord::new(2, 1), FieldSpec::s_robot()).unwrap();
        assert!(!structure_present(&wrapped(&env), &x, p_x));
        // Out-of-bounds translation can never be satisfied.
        assert!(!structure_present(&wrapped(&env), &x, GridCoord::new(3, 1)));
    }

    #[test]
    fn structure_presence_st() {
        let mut env = EnvironmentSt::filled(2, 1, SquareType::new("e_B"), vec![]);
        let x = Structure::single();
        env.set_type(GridCoord::new(2, 1), SquareType::structure()).unwrap();
        assert!(structure_present(
            &Environment::St(env.clone()),
            &x,
            GridCoord::new(2, 1)
        ));
        assert!(!structure_present(
            &Environment::St(env),
            &x,
            GridCoord::new(1, 1)
        ));
    }

    #[test]
    fn exact_zero_at_decay_boundary() {
        let spec = FieldSpec::point("fq", rat(3, 10), rat(1, 10));
        let mut env = sf_env(5, 1, vec![spec.clone()]);
        env.add_point_field(GridCoord::new(1, 1), spec).unwrap();
        assert_eq!(
            env.field_value(&[], "fq", GridCoord::new(4, 1)).unwrap(),
            Rational::ZERO
        );
    }
}
