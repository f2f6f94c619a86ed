// temporary calibration probe; deleted before release
use oscillorm::opnorm::*;
use oscillorm::theory::*;

#[test]
#[ignore]
fn probe_slopes() {
    let ladder: Vec<f64> = (7..=11).map(|e| (1u64 << e) as f64).collect();
    let cells: Vec<(u32, u32, u32, f64, f64)> = vec![
        (1, 1, 1, 0.25, 0.25),
        (1, 1, 1, 0.5, 0.5),
        (1, 1, 1, 0.75, 0.5),
        (1, 1, 1, 0.0, 1.0),
        (1, 1, 2, 0.75, 0.5),
        (1, 1, 3, 0.75, 0.5),
        (1, 2, 1, 0.0, 1.0),
        (1, 2, 2, 0.75, 0.5),
        (2, 2, 1, 0.0, 1.0),
        (2, 1, 1, 0.75, 0.5),
    ];
    for (j, k, n, a, b) in cells {
        let fam = PhaseFamily::new(j, k, n).unwrap();
        let point = LebesguePoint::new(a, b).unwrap();
        let c_theory = theoretical_exponent(fam, point);
        let t0 = std::time::Instant::now();
        let mut lowers = Vec::new();
        let mut uppers = Vec::new();
        for &nf in &ladder {
            let op = build_operator(fam, nf, 8).unwrap();
            let est = norm_lower_bound(&op, point, 2).unwrap();
            lowers.push((nf, est.lower));
            uppers.push((nf, est.upper));
        }
        let lo = fit_exponent(&lowers).unwrap();
        let up = fit_exponent(&uppers).unwrap();
        println!(
            "({j},{k},{n}) @ ({a},{b}): C={c_theory:.4} lower_slope={:.4} upper_slope={:.4}  [{:.1}s]",
            lo.slope,
            up.slope,
            t0.elapsed().as_secs_f64()
        );
    }
}

#[test]
#[ignore]
fn probe_energy() {
    let ladder: Vec<f64> = (7..=11).map(|e| (1u64 << e) as f64).collect();
    for fam in PhaseFamily::all_desk_scale() {
        let t0 = std::time::Instant::now();
        let pairs: Vec<(f64, f64)> = ladder
            .iter()
            .map(|&nf| {
                let op = build_operator(fam, nf, 8).unwrap();
                (nf, norm_2_2(&op, 1e-4).unwrap())
            })
            .collect();
        let fit = fit_exponent(&pairs).unwrap();
        let expected = if fam.n() == 1 && fam.j() == 2 {
            -0.25
        } else {
            -0.5 / fam.k() as f64
        };
        println!(
            "{fam}: slope {:.4} expected {:.2} resid {:.3} [{:.1}s]",
            fit.slope,
            expected,
            fit.max_residual,
            t0.elapsed().as_secs_f64()
        );
    }
}

#[test]
#[ignore]
fn probe_candidates_b1() {
    let ladder: Vec<f64> = (7..=13).map(|e| (1u64 << e) as f64).collect();
    let points = [
        LebesguePoint::new(0.0, 1.0).unwrap(),
        LebesguePoint::new(1.0, 1.0).unwrap(),
        LebesguePoint::new(0.25, 0.25).unwrap(),
    ];
    for fam in PhaseFamily::all_desk_scale() {
        let mut rows: Vec<Vec<CandidateRatios>> = Vec::new();
        for &nf in &ladder {
            let op = build_operator(fam, nf, 8).unwrap();
            rows.push(candidate_ratios(&op, 0.1, &points).unwrap());
        }
        for (ip, p) in points.iter().enumerate() {
            let foc: Vec<(f64, f64)> =
                ladder.iter().zip(&rows).map(|(&n, r)| (n, r[ip].focusing)).collect();
            let con: Vec<(f64, f64)> =
                ladder.iter().zip(&rows).map(|(&n, r)| (n, r[ip].constant)).collect();
            let osc: Vec<(f64, f64)> =
                ladder.iter().zip(&rows).map(|(&n, r)| (n, r[ip].oscillatory)).collect();
            let (a, b) = (p.a(), p.b());
            println!(
                "{fam} @ ({a},{b}): foc {:.3} (want {:.3}) con {:.3} (want {:.3}) osc {:.3} (want -0.5)",
                fit_exponent(&foc).unwrap().slope,
                -(fam.n() as f64 / fam.j() as f64) * (1.0 - a),
                fit_exponent(&con).unwrap().slope,
                -b / fam.k() as f64,
                fit_exponent(&osc).unwrap().slope,
            );
        }
    }
}

#[test]
#[ignore]
fn probe_top_rung_timing() {
    let fam = PhaseFamily::new(1, 1, 2).unwrap();
    let t0 = std::time::Instant::now();
    let op = build_operator(fam, 8192.0, 8).unwrap();
    println!("build: {:.2}s rows {} cols {}", t0.elapsed().as_secs_f64(), op.rows(), op.cols());
    let t0 = std::time::Instant::now();
    let c22 = norm_2_2(&op, 1e-4).unwrap();
    println!("norm22: {:.2}s -> {c22:.6}", t0.elapsed().as_secs_f64());
    let t0 = std::time::Instant::now();
    let est = norm_lower_bound(&op, LebesguePoint::new(0.75, 0.5).unwrap(), 2).unwrap();
    println!("estimate(0.75,0.5) restarts=2: {:.2}s -> {:?}", t0.elapsed().as_secs_f64(), est);
}

#[test]
#[ignore]
fn probe_ascent_trajectory() {
    use num_complex::Complex64;
    let fam = PhaseFamily::new(1, 1, 2).unwrap();
    let op = build_operator(fam, 8192.0, 8).unwrap();
    let (a, b) = (0.75, 0.5);
    let wr = op.grid().rho_weights.clone();
    let ws = op.grid().s_weights.clone();
    let cands = candidate_vectors(fam, 8192.0, op.grid(), 0.1).unwrap();
    let mut f: Vec<Complex64> = cands.constant.clone();
    let q = 1.0 / b;
    let pd = 1.0 / (1.0 - a);
    let mut t = std::time::Instant::now();
    for step in 0..60 {
        let nf = lp_norm(&f, &wr, a);
        let g = op.apply(&f);
        let r = lp_norm(&g, &ws, b) / nf;
        if step % 5 == 0 {
            println!("step {step}: ratio {r:.6} [{:.1}s]", t.elapsed().as_secs_f64());
            t = std::time::Instant::now();
        }
        let mut gg = g;
        let peak = gg.iter().map(|v| v.norm()).fold(0.0, f64::max);
        gg.iter_mut().for_each(|v| *v /= peak);
        for v in gg.iter_mut() {
            let m = v.norm();
            *v = if m == 0.0 { Complex64::new(0.0, 0.0) } else { *v * m.powf(q - 2.0) };
        }
        let mut u = op.apply_adjoint(&gg);
        let upeak = u.iter().map(|v| v.norm()).fold(0.0, f64::max);
        u.iter_mut().for_each(|v| *v /= upeak);
        for v in u.iter_mut() {
            let m = v.norm();
            *v = if m == 0.0 { Complex64::new(0.0, 0.0) } else { *v * m.powf(pd - 2.0) };
        }
        f = u;
    }
}
