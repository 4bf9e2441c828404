//! Wynn's epsilon algorithm for accelerating slowly convergent partial sums.

/// Extrapolated limit of `seq` together with a crude error estimate
/// (distance between the two most recent even-column estimates).
pub fn wynn_epsilon(seq: &[f64]) -> (f64, f64) {
    let n = seq.len();
    if n == 0 {
        return (0.0, f64::INFINITY);
    }
    if n < 3 {
        let last = seq[n - 1];
        let err = if n == 2 { (seq[1] - seq[0]).abs() } else { f64::INFINITY };
        return (last, err);
    }
    // prev = column k-1, cur = column k. Column 0 is the sequence itself.
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = seq.to_vec();
    let mut estimates: Vec<f64> = vec![seq[n - 1]];
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        let mut broke = false;
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d == 0.0 || !d.is_finite() {
                broke = true;
                break;
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        if broke {
            break;
        }
        prev = cur;
        cur = next;
        k += 1;
        if k % 2 == 0 {
            let v = *cur.last().unwrap();
            if !v.is_finite() {
                break;
            }
            estimates.push(v);
        }
    }
    let m = estimates.len();
    let best = estimates[m - 1];
    let err = if m >= 2 {
        (estimates[m - 1] - estimates[m - 2]).abs()
    } else {
        (seq[n - 1] - seq[n - 2]).abs()
    };
    (best, err)
}
