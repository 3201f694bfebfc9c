use super::ParetoError;

fn check_len(a: &[f64], b: &[f64]) -> Result<(), ParetoError> {
    if a.len() != b.len() {
        return Err(ParetoError::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// `b <= a` componentwise (maximization; reflexive).
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool, ParetoError> {
    check_len(a, b)?;
    Ok(a.iter().zip(b).all(|(x, y)| y <= x))
}

/// `b <= a` componentwise with at least one strict inequality.
pub fn strictly_dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if y > x {
            return false;
        }
        strict |= y < x;
    }
    strict
}

/// Indices (ascending) of vectors not strictly dominated by any other.
/// Equal maximal vectors are all kept.
pub fn pareto_front_indices(points: &[Vec<f64>]) -> Result<Vec<usize>, ParetoError> {
    let first = points.first().ok_or(ParetoError::Empty("point list"))?;
    for p in points {
        check_len(first, p)?;
    }
    // In lexicographically descending order any strict dominator precedes
    // the point it dominates, so comparing against the front so far suffices.
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (&points[a], &points[b]);
        pa.iter()
            .zip(pb)
            .map(|(x, y)| y.total_cmp(x))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut front: Vec<usize> = Vec::new();
    for i in order {
        if !front.iter().any(|&f| strictly_dominates(&points[f], &points[i])) {
            front.push(i);
        }
    }
    front.sort_unstable();
    Ok(front)
}

/// `min_i max_j (y_j - b_ij)`: positive outside `Dom(B)` (then equal to the
/// Chebyshev distance to it), nonpositive inside.
pub fn signed_gap(y: &[f64], set: &[Vec<f64>]) -> Result<f64, ParetoError> {
    if set.is_empty() {
        return Err(ParetoError::Empty("front"));
    }
    let mut best = f64::INFINITY;
    for b in set {
        check_len(y, b)?;
        let m = y
            .iter()
            .zip(b)
            .map(|(a, c)| a - c)
            .fold(f64::NEG_INFINITY, f64::max);
        best = best.min(m);
    }
    Ok(best)
}

/// Chebyshev distance from `u` to the region dominated by `front`.
pub fn dist_to_dominated(u: &[f64], front: &[Vec<f64>]) -> Result<f64, ParetoError> {
    Ok(signed_gap(u, front)?.max(0.0))
}

/// Chebyshev distance from `y` to the boundary of `Dom(set)`, from either side.
pub fn boundary_distance(y: &[f64], set: &[Vec<f64>]) -> Result<f64, ParetoError> {
    Ok(signed_gap(y, set)?.abs())
}
