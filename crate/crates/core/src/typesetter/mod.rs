//! Greedy text composition. The text box starts as the whole poster split
//! into one row per line; size and axis modifiers shrink the type until
//! every line fits the available width.

pub mod measure;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::LinePlan;
use crate::config::{StyleConfig, TypefaceDef};
use crate::styling::{BoxAlign, PosterFormat, PosterStyle, TextAlign};
pub use measure::{MeasureError, SyntheticMeasurer, FontMeasurer, TextMeasurer};

/// Fit comparisons tolerate this much overshoot, in points.
pub const FIT_EPSILON: f64 = 1e-6;
/// Size changes needed before exhausted axes return to their defaults.
pub const RESET_AFTER_SIZE_CHANGES: u32 = 4;
/// Ascent as a fraction of the font size, used to place baselines.
pub const ASCENT: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TypesetError {
    #[error("nothing to typeset")]
    EmptyPlan,
    #[error("unknown typeface `{0}`")]
    UnknownTypeface(String),
    #[error("no fit after {0} operations")]
    AttemptCapExceeded(u32),
    #[error("row height is already at its minimum")]
    MinRowHeight,
    #[error("every axis is at its minimum")]
    NoMovableAxis,
    #[error("text cannot fit: minimum row height reached and no axis can move")]
    MinRowHeightUnreachable,
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FontState {
    pub size: f64,
    pub leading: f64,
    pub axes: BTreeMap<String, f64>,
    pub attempts: u32,
    pub size_changes_since_axis_mod: u32,
}

impl FontState {
    pub fn new(size: f64, leading: f64, axes: BTreeMap<String, f64>) -> Self {
        Self { size, leading, axes, attempts: 0, size_changes_since_axis_mod: 0 }
    }

    /// State for a leading, with every axis at its default.
    pub fn initial(leading: f64, typeface: &TypefaceDef) -> Self {
        let axes = typeface.axes.iter().map(|(t, a)| (t.clone(), a.default)).collect();
        Self::new(leading * typeface.leading_to_size_factor, leading, axes)
    }

    pub fn axis(&self, tag: &str) -> Option<f64> {
        self.axes.get(tag).copied()
    }

    /// Axes that can still decrease.
    pub fn movable_axes(&self, typeface: &TypefaceDef) -> Vec<String> {
        self.axes
            .iter()
            .filter(|(tag, &v)| typeface.axes.get(*tag).is_some_and(|a| v > a.min))
            .map(|(tag, _)| tag.clone())
            .collect()
    }
}

/// Row grid of the text box: one column, `rows` rows of `row_height`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub rows: usize,
    pub row_height: f64,
    pub margin_top: f64,
    pub margin_bottom: f64,
    pub margin_side: f64,
}

impl Grid {
    pub fn initial(rows: usize, format: &PosterFormat, margin_fraction: f64) -> Self {
        Self {
            rows,
            row_height: format.height_pt() / rows as f64,
            margin_top: 0.0,
            margin_bottom: 0.0,
            margin_side: format.width_pt() * margin_fraction,
        }
    }

    pub fn content_width(&self, format: &PosterFormat) -> f64 {
        format.width_pt() - 2.0 * self.margin_side
    }

    pub fn content_height(&self) -> f64 {
        self.rows as f64 * self.row_height
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub fn within(&self, outer: &Rect) -> bool {
        self.x >= outer.x - FIT_EPSILON
            && self.y >= outer.y - FIT_EPSILON
            && self.x + self.width <= outer.x + outer.width + FIT_EPSILON
            && self.y + self.height <= outer.y + outer.height + FIT_EPSILON
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedLine {
    pub text: String,
    /// Left edge of the line box.
    pub x: f64,
    pub baseline: f64,
    pub width: f64,
    /// Line box: ascent above and descent below the baseline.
    pub bbox: Rect,
}

impl PlacedLine {
    /// Horizontal anchor for the given alignment.
    pub fn anchor_x(&self, align: TextAlign) -> f64 {
        match align {
            TextAlign::Left => self.x,
            TextAlign::Centre => self.x + self.width / 2.0,
            TextAlign::Right => self.x + self.width,
        }
    }
}

/// One operator application, as recorded by [`typeset`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Operation {
    Size { decrement: f64 },
    Axis { tag: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Composition {
    pub lines: Vec<PlacedLine>,
    pub grid: Grid,
    pub state: FontState,
    pub operations_used: u32,
    pub operations: Vec<Operation>,
    pub elapsed: f64,
}

impl Composition {
    /// Whether every line box lies inside the poster.
    pub fn contained_in(&self, format: &PosterFormat) -> bool {
        let page = Rect { x: 0.0, y: 0.0, width: format.width_pt(), height: format.height_pt() };
        self.lines.iter().all(|l| l.bbox.within(&page))
    }
}

/// Size modifier. The decrement grows with the number of operations so
/// far; leading follows the size and never drops below the typeface's
/// minimum row height. The height freed by smaller rows becomes margin on
/// the side opposite the box alignment.
pub fn apply_size_modifier(
    state: &FontState,
    grid: &Grid,
    typeface: &TypefaceDef,
    box_align: BoxAlign,
) -> Result<(FontState, Grid), TypesetError> {
    if state.leading <= typeface.min_row_height + FIT_EPSILON {
        return Err(TypesetError::MinRowHeight);
    }
    let decrement = typeface.decrement_at(state.attempts);
    let size = state.size - decrement;
    let leading = (size / typeface.leading_to_size_factor).max(typeface.min_row_height);

    let mut next = state.clone();
    next.leading = leading;
    next.size = leading * typeface.leading_to_size_factor;
    next.attempts += 1;
    next.size_changes_since_axis_mod += 1;

    let freed = grid.rows as f64 * (grid.row_height - leading);
    let mut g = *grid;
    g.row_height = leading;
    match box_align {
        BoxAlign::Top => g.margin_bottom += freed,
        BoxAlign::Bottom => g.margin_top += freed,
        BoxAlign::Middle => {
            g.margin_top += freed / 2.0;
            g.margin_bottom += freed / 2.0;
        }
    }
    Ok((next, g))
}

/// Axis modifier: one step down on an axis drawn uniformly among those
/// above their minimum.
pub fn apply_axis_modifier<R: Rng + ?Sized>(
    state: &FontState,
    typeface: &TypefaceDef,
    rng: &mut R,
) -> Result<(FontState, String), TypesetError> {
    let movable = state.movable_axes(typeface);
    if movable.is_empty() {
        return Err(TypesetError::NoMovableAxis);
    }
    let tag = movable[rng.random_range(0..movable.len())].clone();
    Ok((step_axis(state, typeface, &tag), tag))
}

/// Moves `tag` one step towards its minimum.
pub fn step_axis(state: &FontState, typeface: &TypefaceDef, tag: &str) -> FontState {
    let def = &typeface.axes[tag];
    let step = typeface.axis_step(tag).unwrap_or(0.0);
    let mut next = state.clone();
    let value = next.axes.get_mut(tag).expect("axis present in state");
    *value = (*value - step).max(def.min);
    next.attempts += 1;
    next.size_changes_since_axis_mod = 0;
    next
}

/// Returns exhausted axes to their defaults once the size has changed
/// enough times since the last axis modification.
pub fn maybe_reset_axes(state: &FontState, typeface: &TypefaceDef) -> FontState {
    let all_min = !state.axes.is_empty()
        && state.axes.iter().all(|(tag, &v)| typeface.axes.get(tag).is_none_or(|a| v <= a.min));
    if !all_min || state.size_changes_since_axis_mod < RESET_AFTER_SIZE_CHANGES {
        return state.clone();
    }
    let mut next = state.clone();
    for (tag, v) in next.axes.iter_mut() {
        if let Some(a) = typeface.axes.get(tag) {
            *v = a.default;
        }
    }
    next.size_changes_since_axis_mod = 0;
    next
}

/// Measured widths of each line.
pub fn line_widths(
    lines: &[String],
    state: &FontState,
    typeface: &TypefaceDef,
    measurer: &dyn TextMeasurer,
) -> Result<Vec<f64>, TypesetError> {
    lines.iter().map(|l| Ok(measurer.width(l, state, typeface)?)).collect()
}

/// Whether every line fits the width between the side margins and the
/// rows fit the poster height. Both bounds are inclusive.
pub fn fits(
    lines: &[String],
    state: &FontState,
    grid: &Grid,
    format: &PosterFormat,
    typeface: &TypefaceDef,
    measurer: &dyn TextMeasurer,
) -> Result<bool, TypesetError> {
    let height = grid.rows as f64 * state.leading + grid.margin_top + grid.margin_bottom;
    if height > format.height_pt() + FIT_EPSILON {
        return Ok(false);
    }
    let available = grid.content_width(format);
    Ok(line_widths(lines, state, typeface, measurer)?.iter().all(|&w| w <= available + FIT_EPSILON))
}

fn place(
    lines: &[String],
    widths: &[f64],
    state: &FontState,
    grid: &Grid,
    format: &PosterFormat,
    align: TextAlign,
) -> Vec<PlacedLine> {
    let available = grid.content_width(format);
    lines
        .iter()
        .zip(widths)
        .enumerate()
        .map(|(i, (text, &width))| {
            let x = grid.margin_side
                + match align {
                    TextAlign::Left => 0.0,
                    TextAlign::Centre => (available - width) / 2.0,
                    TextAlign::Right => available - width,
                };
            let row_top = grid.margin_top + i as f64 * grid.row_height;
            let box_top = row_top + (grid.row_height - state.size) / 2.0;
            PlacedLine {
                text: text.clone(),
                x,
                baseline: box_top + ASCENT * state.size,
                width,
                bbox: Rect { x, y: box_top, width, height: state.size },
            }
        })
        .collect()
}

/// Composes the lines for a styled poster.
///
/// Each iteration tests the fit; on failure it draws the size or the axis
/// modifier with equal probability (only size for static typefaces) and
/// falls back to the other one when the drawn operator cannot apply.
pub fn typeset<R: Rng + ?Sized>(
    plan: &LinePlan,
    style: &PosterStyle,
    config: &StyleConfig,
    rng: &mut R,
    measurer: &dyn TextMeasurer,
) -> Result<Composition, TypesetError> {
    let started = Instant::now();
    if plan.is_empty() {
        return Err(TypesetError::EmptyPlan);
    }
    let typeface = config
        .typeface(&style.typeface)
        .ok_or_else(|| TypesetError::UnknownTypeface(style.typeface.clone()))?;
    let format = &style.format;
    let cap = config.layout.attempt_cap;

    let mut grid = Grid::initial(plan.len(), format, config.layout.horizontal_margin_fraction);
    if grid.row_height < typeface.min_row_height {
        return Err(TypesetError::MinRowHeightUnreachable);
    }
    let mut state = FontState::initial(grid.row_height, typeface);
    let mut operations = Vec::new();

    loop {
        let widths = line_widths(&plan.lines, &state, typeface, measurer)?;
        if fits(&plan.lines, &state, &grid, format, typeface, measurer)? {
            return Ok(Composition {
                lines: place(&plan.lines, &widths, &state, &grid, format, style.text_align),
                grid,
                operations_used: state.attempts,
                state,
                operations,
                elapsed: started.elapsed().as_secs_f64(),
            });
        }
        if state.attempts >= cap {
            return Err(TypesetError::AttemptCapExceeded(cap));
        }

        let can_size = state.leading > typeface.min_row_height + FIT_EPSILON;
        let can_axis = !state.movable_axes(typeface).is_empty();
        let want_axis = typeface.is_variable() && rng.random_bool(0.5);
        let use_axis = match (want_axis, can_size, can_axis) {
            (_, false, false) => return Err(TypesetError::MinRowHeightUnreachable),
            (true, _, true) | (false, false, true) => true,
            _ => false,
        };

        if use_axis {
            let (next, tag) = apply_axis_modifier(&state, typeface, rng)?;
            state = next;
            operations.push(Operation::Axis { tag });
        } else {
            let decrement = typeface.decrement_at(state.attempts);
            let (next, g) = apply_size_modifier(&state, &grid, typeface, style.box_align)?;
            state = maybe_reset_axes(&next, typeface);
            grid = g;
            operations.push(Operation::Size { decrement });
        }
    }
}
