use crate::model::{ArrowId, ArrowSpec, DimerQuiver};

/// The same quiver with arrow ids permuted deterministically by `seed`.
pub fn relabel_arrows(q: &DimerQuiver, seed: u64) -> DimerQuiver {
    let n = q.arrows().len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    for i in (1..n).rev() {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let j = (state >> 33) as usize % (i + 1);
        order.swap(i, j);
    }
    // order[new] = old
    let mut new_of = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        new_of[old] = new;
    }
    let arrows = order
        .iter()
        .map(|&old| {
            let a = q.arrow(ArrowId(old));
            ArrowSpec::new(a.name.clone(), a.tail.0, a.head.0, (a.winding.u1, a.winding.u2))
        })
        .collect();
    let faces = q
        .faces()
        .iter()
        .map(|f| (f.sign, f.boundary.iter().map(|a| ArrowId(new_of[a.0])).collect()))
        .collect();
    DimerQuiver::new(q.vertex_count(), arrows, faces).expect("relabeling preserves integrity")
}
