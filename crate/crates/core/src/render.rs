//! Plain-text grid pictures.
//!
//! One glyph per square, rows printed north to south so the page matches
//! the grid ((1, 1) is the bottom-left character). Precedence on a square:
//! robot `R`, then structure `X`, then the square's type or point-field
//! glyph, then `.` for nothing. A legend mapping every glyph back to its
//! full name is appended, which keeps renders unambiguous even when names
//! share initials.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::env::{Environment, FieldSpec, E_ROBOT, E_X, FQ_X};
use crate::grid::GridCoord;

/// Largest grid worth printing; anything bigger is data, not a picture.
pub const MAX_RENDER_DIM: u32 = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("{width}x{height} grid exceeds the {MAX_RENDER_DIM}x{MAX_RENDER_DIM} render limit")]
    Oversize { width: u32, height: u32 },
    #[error("square ({col}, {row}) outside {width}x{height} grid")]
    MarkOffGrid {
        col: u32,
        row: u32,
        width: u32,
        height: u32,
    },
}

/// Squares to mark on top of the environment.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RenderOverlay {
    pub robots: Vec<GridCoord>,
    pub structure: Vec<GridCoord>,
}

/// Stable glyph assignment: preferred initials first, then the remaining
/// pool in order. `R` and `X` are never handed out; `.` marks emptiness
/// (and the conventional blank type `e_B`).
struct Glyphs {
    by_name: BTreeMap<String, char>,
    used: Vec<char>,
}

impl Glyphs {
    fn new() -> Glyphs {
        Glyphs {
            by_name: BTreeMap::new(),
            used: vec!['R', 'X', '.'],
        }
    }

    fn preferred(name: &str) -> Option<char> {
        let stem = name
            .strip_prefix("e_")
            .or_else(|| name.strip_prefix("fq_"))
            .or_else(|| name.strip_prefix("s_"))
            .unwrap_or(name);
        stem.chars().next().map(|c| c.to_ascii_uppercase())
    }

    fn assign(&mut self, name: &str) -> char {
        if let Some(&g) = self.by_name.get(name) {
            return g;
        }
        let pool = ('A'..='Z').chain('a'..='z').chain('0'..='9');
        let glyph = Self::preferred(name)
            .filter(|c| c.is_ascii_alphanumeric() && !self.used.contains(c))
            .unwrap_or_else(|| {
                pool.clone()
                    .find(|c| !self.used.contains(c))
                    .unwrap_or('?')
            });
        self.used.push(glyph);
        self.by_name.insert(name.to_owned(), glyph);
        glyph
    }
}

fn check_marks(env: &Environment, marks: &[GridCoord]) -> Result<(), RenderError> {
    for p in marks {
        if !env.in_bounds(*p) {
            return Err(RenderError::MarkOffGrid {
                col: p.col,
                row: p.row,
                width: env.width(),
                height: env.height(),
            });
        }
    }
    Ok(())
}

/// Renders `env` with the overlay marks, legend appended.
pub fn render_ascii(env: &Environment, overlay: &RenderOverlay) -> Result<String, RenderError> {
    let (width, height) = (env.width(), env.height());
    if width > MAX_RENDER_DIM || height > MAX_RENDER_DIM {
        return Err(RenderError::Oversize { width, height });
    }
    check_marks(env, &overlay.robots)?;
    check_marks(env, &overlay.structure)?;

    let mut glyphs = Glyphs::new();
    // Assign in declaration order so the same environment always renders
    // the same way.
    match env {
        Environment::St(e) => {
            for t in e.type_set() {
                if !matches!(t.name(), "e_B" | E_X | E_ROBOT) {
                    glyphs.assign(t.name());
                }
            }
        }
        Environment::Sf(e) => {
            for spec in e.field_set() {
                if spec.quantity != FQ_X && spec.quantity != crate::env::FQ_ROBOT {
                    glyphs.assign(&spec.quantity);
                }
            }
        }
    }

    let square_glyph = |p: GridCoord, glyphs: &mut Glyphs| -> char {
        if overlay.robots.contains(&p) {
            return 'R';
        }
        if overlay.structure.contains(&p) {
            return 'X';
        }
        match env {
            Environment::St(e) => match e.type_at(p).name() {
                "e_B" => '.',
                E_X => 'X',
                E_ROBOT => 'R',
                other => glyphs.assign(other),
            },
            Environment::Sf(e) => match e.point_field_at(p) {
                None => '.',
                Some(FieldSpec { quantity, .. }) if quantity == FQ_X => 'X',
                Some(spec) => glyphs.assign(&spec.quantity),
            },
        }
    };

    let mut out = String::new();
    for row in (1..=height).rev() {
        for col in 1..=width {
            out.push(square_glyph(GridCoord::new(col, row), &mut glyphs));
        }
        out.push('\n');
    }

    out.push_str("legend:\n");
    out.push_str("  . empty\n");
    for (name, glyph) in &glyphs.by_name {
        let _ = writeln!(out, "  {glyph} {name}");
    }
    out.push_str("  X structure\n");
    out.push_str("  R robot\n");
    if let Environment::Sf(e) = env {
        for (edge, specs) in e.edge_fields() {
            for spec in specs {
                let _ = writeln!(
                    out,
                    "  {:?} edge: {} (source {}, decay {})",
                    edge, spec.quantity, spec.source, spec.decay
                );
            }
        }
    }
    let _ = writeln!(out, "  rows north to south; (1, 1) at bottom left");
    Ok(out)
}
