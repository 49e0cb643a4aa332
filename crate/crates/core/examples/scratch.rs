use ldpc_power::de::DecoderRule;
use ldpc_power::optim::{node_model_total_ln, wire_model_total_ln};

fn fit(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>()
}

fn main() {
    let b = DecoderRule::gallager_b();
    // Theorem-5 brackets on an extended log-domain ladder.
    for xiw in [1.0, 0.01] {
        let ladder = [147.0, 1000.0, 5000.0, 25000.0];
        for bracket in ["lower", "upper"] {
            let mut xs = vec![];
            let mut ys = vec![];
            let mut ns = vec![];
            for &l in &ladder {
                let w = wire_model_total_ln(&b, 4, 8, xiw, 1.0, 1.0, l, None).unwrap();
                let o = if bracket == "lower" { w.lower } else { w.upper };
                xs.push(l.ln());
                ys.push(o.p_total.ln());
                ns.push(o.n_iter);
            }
            println!("thm5 xiw={xiw} {bracket}: exponent {:.4} N {:?}", fit(&xs, &ys), ns);
        }
    }
    // Lemma-2 fixed-P_T stabilization on a deeper ladder.
    let a = DecoderRule::gallager_a();
    let mut ratios = vec![];
    for l in [18.42, 27.63, 36.84, 46.05] {
        let o = node_model_total_ln(&a, 3, 6, 1.0, 1.0, l, Some(4.0)).unwrap();
        ratios.push(o.p_total / l);
    }
    println!("node A fixed-PT deep: {ratios:?} spread {:.4}",
        ratios.iter().copied().fold(f64::MIN, f64::max) / ratios.iter().copied().fold(f64::MAX, f64::min));
}
