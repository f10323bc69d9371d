//! ISO 216 (A, B) and ISO 269 (C) poster formats.

use serde::{Deserialize, Serialize};

pub const MM_TO_PT: f64 = 72.0 / 25.4;

// (width, height) in millimetres, indices 0..=7
const A_SERIES: [(u32, u32); 8] =
    [(841, 1189), (594, 841), (420, 594), (297, 420), (210, 297), (148, 210), (105, 148), (74, 105)];
const B_SERIES: [(u32, u32); 8] =
    [(1000, 1414), (707, 1000), (500, 707), (353, 500), (250, 353), (176, 250), (125, 176), (88, 125)];
const C_SERIES: [(u32, u32); 8] =
    [(917, 1297), (648, 917), (458, 648), (324, 458), (229, 324), (162, 229), (114, 162), (81, 114)];

/// A portrait ISO paper format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosterFormat {
    pub name: String,
    pub width_mm: u32,
    pub height_mm: u32,
}

impl PosterFormat {
    /// Looks up names like `"A3"`, `"B1"` or `"C4"` (series letter plus
    /// index 0..=7).
    pub fn from_name(name: &str) -> Option<PosterFormat> {
        let mut chars = name.chars();
        let table = match chars.next()? {
            'A' => &A_SERIES,
            'B' => &B_SERIES,
            'C' => &C_SERIES,
            _ => return None,
        };
        let rest = chars.as_str();
        if rest.len() != 1 {
            return None;
        }
        let idx: usize = rest.parse().ok()?;
        let &(w, h) = table.get(idx)?;
        Some(PosterFormat { name: name.to_string(), width_mm: w, height_mm: h })
    }

    pub fn width_pt(&self) -> f64 {
        f64::from(self.width_mm) * MM_TO_PT
    }

    pub fn height_pt(&self) -> f64 {
        f64::from(self.height_mm) * MM_TO_PT
    }

    pub fn aspect(&self) -> f64 {
        f64::from(self.height_mm) / f64::from(self.width_mm)
    }

    /// Every format in the tables.
    pub fn all() -> Vec<PosterFormat> {
        ["A", "B", "C"]
            .iter()
            .flat_map(|s| (0..8).map(move |i| format!("{s}{i}")))
            .filter_map(|n| PosterFormat::from_name(&n))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a4_and_b3() {
        let a4 = PosterFormat::from_name("A4").unwrap();
        assert_eq!((a4.width_mm, a4.height_mm), (210, 297));
        let b3 = PosterFormat::from_name("B3").unwrap();
        assert_eq!((b3.width_mm, b3.height_mm), (353, 500));
    }

    #[test]
    fn b_series_is_geometric_mean_of_a() {
        // ISO 216: Bn = sqrt(An * A(n-1)), rounded to the millimetre
        for i in 1..8 {
            let a = PosterFormat::from_name(&format!("A{i}")).unwrap();
            let a_prev = PosterFormat::from_name(&format!("A{}", i - 1)).unwrap();
            let b = PosterFormat::from_name(&format!("B{i}")).unwrap();
            let w = (f64::from(a.width_mm) * f64::from(a_prev.width_mm)).sqrt();
            assert!((f64::from(b.width_mm) - w).abs() <= 1.0, "B{i}");
        }
    }

    #[test]
    fn every_format_is_root_two() {
        for f in PosterFormat::all() {
            let err = (f.aspect() - std::f64::consts::SQRT_2).abs() / std::f64::consts::SQRT_2;
            assert!(err < 0.005, "{} off by {err}", f.name);
        }
    }

    #[test]
    fn unknown_names() {
        for n in ["D4", "A8", "A", "A10", "a4", ""] {
            assert!(PosterFormat::from_name(n).is_none(), "{n}");
        }
    }
}
