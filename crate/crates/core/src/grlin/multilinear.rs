use crate::grlin::{Field, Scalar, SparseVec};

/// Calls `f(indices, coefficient)` for every term of the tensor product of `inputs`.
pub fn for_each_product(field: Field, inputs: &[&SparseVec], mut f: impl FnMut(&[usize], &Scalar)) {
    let mut idx = Vec::with_capacity(inputs.len());
    recurse(inputs, &mut idx, field.one(), &mut f);
}

fn recurse(
    inputs: &[&SparseVec],
    idx: &mut Vec<usize>,
    coeff: Scalar,
    f: &mut impl FnMut(&[usize], &Scalar),
) {
    match inputs.split_first() {
        None => f(idx, &coeff),
        Some((head, rest)) => {
            for (k, c) in head.iter() {
                idx.push(k);
                recurse(rest, idx, &coeff * c, f);
                idx.pop();
            }
        }
    }
}

/// All tuples drawing the `i`-th entry from `0..sizes[i]`.
pub fn index_tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(sizes.len())];
    for &n in sizes {
        let mut next = Vec::with_capacity(out.len() * n);
        for t in &out {
            for i in 0..n {
                let mut t2 = t.clone();
                t2.push(i);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_enumerate_product() {
        assert_eq!(index_tuples(&[2, 3]).len(), 6);
        assert_eq!(index_tuples(&[]).len(), 1);
        assert!(index_tuples(&[2, 0]).is_empty());
    }

    #[test]
    fn products_multiply_coefficients() {
        let f = Field::Rational;
        let a = SparseVec::from_entries([(0, f.from_i64(2)), (1, f.from_i64(3))]);
        let b = SparseVec::from_entries([(5, f.from_i64(7))]);
        let mut total = f.zero();
        for_each_product(f, &[&a, &b], |_, c| total = &total + c);
        assert_eq!(total, f.from_i64(35));
    }
}
