//! Places probe accuracies on an anchor curve.

use algoeval::metrics::{infer_probe_complexity, AnchorCurve};

fn main() -> algoeval::Result<()> {
    // a curve with a bump: smoothing keeps it non-increasing before inversion
    let curve = AnchorCurve::new(vec![(0.0, 0.95), (1.0, 0.8), (2.0, 0.4), (3.0, 0.55), (4.0, 0.2)])?;
    println!("smoothed {:?}", curve.smoothed().points());
    for acc in [0.99, 0.9, 0.6, 0.4, 0.3, 0.1] {
        let e = infer_probe_complexity(&curve, acc);
        println!("accuracy {acc:.2} -> level index {:.2}, nearest {}", e.ordinal, e.nearest);
    }
    Ok(())
}
