use super::dominance::pareto_front_indices;
use super::ParetoError;

/// Lebesgue measure of the union of boxes `[reference, p]`.
///
/// Coordinates below the reference are clipped to it. Two objectives use a
/// sweep; more objectives slice along the last coordinate and recurse.
pub fn hypervolume(points: &[Vec<f64>], reference: &[f64]) -> Result<f64, ParetoError> {
    let d = reference.len();
    if d == 0 {
        return Err(ParetoError::LengthMismatch { expected: 1, found: 0 });
    }
    let mut clipped = Vec::with_capacity(points.len());
    for p in points {
        if p.len() != d {
            return Err(ParetoError::LengthMismatch {
                expected: d,
                found: p.len(),
            });
        }
        let c: Vec<f64> = p.iter().zip(reference).map(|(a, r)| a.max(*r)).collect();
        if c.iter().zip(reference).all(|(a, r)| a > r) {
            clipped.push(c);
        }
    }
    if clipped.is_empty() {
        return Ok(0.0);
    }
    let front = pareto_front_indices(&clipped)?;
    let mut pts: Vec<Vec<f64>> = front.into_iter().map(|i| clipped[i].clone()).collect();
    pts.dedup();
    Ok(volume(pts, reference))
}

fn volume(mut pts: Vec<Vec<f64>>, r: &[f64]) -> f64 {
    let d = r.len();
    match d {
        1 => pts.iter().map(|p| p[0]).fold(r[0], f64::max) - r[0],
        2 => {
            pts.sort_by(|a, b| b[0].total_cmp(&a[0]).then(b[1].total_cmp(&a[1])));
            let mut area = 0.0;
            let mut top = r[1];
            for p in &pts {
                if p[1] > top {
                    area += (p[0] - r[0]) * (p[1] - top);
                    top = p[1];
                }
            }
            area
        }
        _ => {
            pts.sort_by(|a, b| b[d - 1].total_cmp(&a[d - 1]));
            let mut total = 0.0;
            let mut slice: Vec<Vec<f64>> = Vec::with_capacity(pts.len());
            for k in 0..pts.len() {
                slice.push(pts[k][..d - 1].to_vec());
                let next = pts.get(k + 1).map_or(r[d - 1], |p| p[d - 1]);
                let h = pts[k][d - 1] - next;
                if h > 0.0 {
                    let keep = pareto_front_indices(&slice).expect("nonempty slice");
                    let base: Vec<Vec<f64>> = keep.iter().map(|&i| slice[i].clone()).collect();
                    total += h * volume(base, &r[..d - 1]);
                }
            }
            total
        }
    }
}

/// `Vol(F(X); r) - Vol(F(evaluated); r)`, floored at 0.
pub fn phv_regret(evaluated: &[usize], true_f: &[Vec<f64>], reference: &[f64]) -> Result<f64, ParetoError> {
    let full = hypervolume(true_f, reference)?;
    let mut sub = Vec::with_capacity(evaluated.len());
    for &i in evaluated {
        sub.push(
            true_f
                .get(i)
                .ok_or(ParetoError::OutOfRange { index: i, len: true_f.len() })?
                .clone(),
        );
    }
    Ok((full - hypervolume(&sub, reference)?).max(0.0))
}

/// Componentwise minimum, the customary reference point.
pub fn componentwise_min(points: &[Vec<f64>]) -> Option<Vec<f64>> {
    let first = points.first()?;
    Some(
        (0..first.len())
            .map(|j| points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(hypervolume(&[vec![1.0, 1.0]], &[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(hypervolume(&[vec![1.0, 2.0], vec![2.0, 1.0]], &[0.0, 0.0]).unwrap(), 3.0);
        assert_eq!(hypervolume(&[], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(hypervolume(&[vec![-1.0, 5.0]], &[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn three_d_union_of_boxes() {
        // unit cube plus a 2x1x1 slab sharing the unit cube: total volume 2
        let pts = vec![vec![1.0, 1.0, 1.0], vec![2.0, 1.0, 1.0]];
        assert_eq!(hypervolume(&pts, &[0.0; 3]).unwrap(), 2.0);
        // two cubes overlapping on [0,1]^2 x [0,1]: 2 + 2 - 1 = 3
        let pts = vec![vec![2.0, 1.0, 1.0], vec![1.0, 1.0, 2.0]];
        assert_eq!(hypervolume(&pts, &[0.0; 3]).unwrap(), 3.0);
    }

    #[test]
    fn regret_extremes() {
        let f = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5]];
        let r = componentwise_min(&f).unwrap();
        assert_eq!(phv_regret(&[0, 1, 2], &f, &r).unwrap(), 0.0);
        assert_eq!(phv_regret(&[], &f, &r).unwrap(), hypervolume(&f, &r).unwrap());
    }
}
