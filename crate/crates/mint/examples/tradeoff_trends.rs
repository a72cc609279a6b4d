//! Fit abstractiveness-factuality trend lines for several systems and read
//! off the factuality each would reach at 50% abstractiveness.
//!
//! Run: `cargo run --example tradeoff_trends`

use mint::{fit_trend, mu_score, pearson_r, TradeoffPoint};

fn main() {
    // (abstractiveness %, factuality %) measurements of four systems, each
    // decoded at several constraint strengths from most extractive to most
    // abstractive.
    let systems: [(&str, &[(f64, f64)]); 4] = [
        ("system-a", &[(11.2, 94.0), (19.6, 88.7), (44.3, 83.3), (68.2, 76.0)]),
        ("system-b", &[(35.0, 80.7), (46.3, 73.3), (59.6, 60.7), (70.5, 60.0)]),
        ("system-c", &[(28.8, 80.0), (38.4, 82.7), (50.7, 68.7), (64.4, 61.3)]),
        (
            "system-d",
            &[(56.8, 50.7), (74.6, 42.0), (80.6, 41.3), (84.0, 41.3), (88.0, 39.3)],
        ),
    ];

    println!("{:10} {:>8} {:>10} {:>6} {:>7}", "system", "slope", "intercept", "r^2", "F@50");
    for (name, data) in systems {
        let points: Vec<TradeoffPoint> = data
            .iter()
            .enumerate()
            .map(|(i, &(a, f))| TradeoffPoint::new(format!("{name}-{i}"), a, f).unwrap())
            .collect();
        let fit = fit_trend(&points).unwrap();
        println!(
            "{:10} {:8.3} {:10.2} {:6.3} {:7.2}",
            name,
            fit.slope,
            fit.intercept,
            fit.r_squared,
            fit.f_at_50()
        );
    }

    // The mu-score folds both axes into one number, weighting factuality
    // twice as heavily as abstractiveness by default.
    println!();
    println!("mu-scores at phi = 2 (unconstrained decodes):");
    for (name, a, f) in [
        ("system-a", 19.6, 88.7),
        ("system-d", 80.6, 41.3),
    ] {
        println!(
            "  {name}: factuality {f}, abstractiveness {a} -> mu {:.1}",
            mu_score(f, a, 2.0).unwrap()
        );
    }

    // Correlation between the two columns across all measurements.
    let (a_col, f_col): (Vec<f64>, Vec<f64>) = systems
        .iter()
        .flat_map(|(_, data)| data.iter().copied())
        .unzip();
    println!();
    println!(
        "abstractiveness vs factuality across all {} points: r = {:.3}",
        a_col.len(),
        pearson_r(&a_col, &f_col).unwrap()
    );
}
