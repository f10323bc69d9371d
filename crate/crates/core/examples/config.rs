//! Loads a configuration directory (the shipped one by default), prints a
//! summary, and shows how validation reports a bad value.
//!
//! cargo run --example config -- path/to/config

use affiche::config::{load_config_dir, StyleConfig};

fn main() {
    let config = match std::env::args().nth(1) {
        Some(dir) => load_config_dir(&dir).unwrap_or_else(|e| {
            eprintln!("{e}");
            std::process::exit(1)
        }),
        None => StyleConfig::shipped().clone(),
    };
    println!("formats {:?} at {} dpi", config.formats, config.dpi);
    println!("predominance threshold {}, white probability {}", config.predominance_threshold, config.white_probability);
    for t in &config.typefaces {
        let axes: Vec<String> = t.axes.iter().map(|(k, a)| format!("{k} {}..{}", a.min, a.max)).collect();
        println!("  {:<14} {:<24} {}", t.id, t.family, axes.join(", "));
    }

    let mut json: serde_json::Value = serde_json::from_str(&config.to_json_pretty()).unwrap();
    json["white_probability"] = 1.5.into();
    match StyleConfig::from_json_str(&json.to_string()) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("rejected: {e}"),
    }
}
