//! Small dense helpers on row-major storage.

/// In-place lower Cholesky factor of the symmetric matrix `a` (row-major, n x n).
/// Only the lower triangle is read; the upper triangle is zeroed.
/// Returns `false` if a pivot is not strictly positive.
pub fn cholesky_in_place(a: &mut [f64], n: usize) -> bool {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0 && d.is_finite()) {
            return false;
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
        for k in j + 1..n {
            a[j * n + k] = 0.0;
        }
    }
    true
}

/// Factor `a + jitter * I`, escalating the jitter tenfold from `start` until
/// it exceeds `max`. Returns the factor and the jitter that worked.
pub fn cholesky_with_jitter(a: &[f64], n: usize, start: f64, max: f64) -> Option<(Vec<f64>, f64)> {
    let mut jitter = start;
    loop {
        let mut m = a.to_vec();
        for i in 0..n {
            m[i * n + i] += jitter;
        }
        if cholesky_in_place(&mut m, n) {
            return Some((m, jitter));
        }
        jitter *= 10.0;
        if jitter > max * (1.0 + 1e-12) {
            return None;
        }
    }
}
