use std::ops::Add;

/// Pairwise (tree) sum with a fixed split, so the rounding pattern depends only
/// on the length of the input.
pub fn pairwise_sum<V: Copy + Add<Output = V>>(xs: &[V], zero: V) -> V {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        return xs.iter().fold(zero, |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid], zero) + pairwise_sum(&xs[mid..], zero)
}
