//! Composes the same lines with synthetic metrics and, when available,
//! real DejaVu Sans metrics, printing the operator trace.

use std::path::Path;

use affiche::analysis::LinePlan;
use affiche::colour::Rgb;
use affiche::config::StyleConfig;
use affiche::styling::{BackgroundSpec, BoxAlign, PosterFormat, PosterStyle, TextAlign};
use affiche::typesetter::{typeset, FontMeasurer, Operation, SyntheticMeasurer, TextMeasurer};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DEJAVU: &str = "/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf";

fn show(name: &str, plan: &LinePlan, style: &PosterStyle, measurer: &dyn TextMeasurer) {
    let config = StyleConfig::shipped();
    let c = typeset(plan, style, config, &mut ChaCha8Rng::seed_from_u64(9), measurer).expect("fits");
    let trace: String = c
        .operations
        .iter()
        .map(|op| match op {
            Operation::Size { .. } => 's',
            Operation::Axis { tag } if tag == "wght" => 'w',
            Operation::Axis { .. } => 'x',
        })
        .collect();
    println!("{name}: {} operations [{trace}]", c.operations_used);
    println!("  size {:.1}pt, leading {:.1}pt, axes {:?}", c.state.size, c.state.leading, c.state.axes);
    println!("  margins top {:.1} bottom {:.1}", c.grid.margin_top, c.grid.margin_bottom);
    for line in &c.lines {
        println!("  x {:>6.1} baseline {:>6.1} width {:>6.1}  {}", line.x, line.baseline, line.width, line.text);
    }
}

fn main() {
    let plan = LinePlan::from_lines(vec![
        "Thunderstorms approaching rapidly,".into(),
        "residents understandably".into(),
        "frightened everywhere.".into(),
    ]);
    let style = PosterStyle {
        format: PosterFormat::from_name("A3").unwrap(),
        background: BackgroundSpec::Solid { bg: Rgb::WHITE, fg: Rgb::BLACK },
        typeface: "roboto_flex".into(),
        text_align: TextAlign::Centre,
        box_align: BoxAlign::Middle,
    };
    show("synthetic", &plan, &style, &SyntheticMeasurer);
    if Path::new(DEJAVU).exists() {
        let fonts = FontMeasurer::new().with_font("roboto_flex", DEJAVU).unwrap();
        show("dejavu", &plan, &style, &fonts);
    }
}
