//! Order-fixed summation so totals do not depend on the thread count.

const LEAF: usize = 64;

pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= LEAF {
        return x.iter().sum();
    }
    let (a, b) = x.split_at(x.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Column sums of a slice of 5-vectors.
pub fn pairwise_sum5(x: &[[f64; 5]]) -> [f64; 5] {
    if x.len() <= LEAF {
        let mut s = [0.0; 5];
        for q in x {
            for k in 0..5 {
                s[k] += q[k];
            }
        }
        return s;
    }
    let (a, b) = x.split_at(x.len() / 2);
    let (sa, sb) = (pairwise_sum5(a), pairwise_sum5(b));
    std::array::from_fn(|k| sa[k] + sb[k])
}
