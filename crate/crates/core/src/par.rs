//! Thin switch between rayon and sequential iteration.
//!
//! Every helper hands each closure call a disjoint output slot, so the
//! floating-point result is identical with and without the `parallel`
//! feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Calls `f(index, chunk)` for every `chunk_len`-sized chunk of `data`.
/// `init` builds per-worker scratch state.
pub(crate) fn for_each_chunk_init<T, S, I, F>(data: &mut [T], chunk_len: usize, init: I, f: F)
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    data.par_chunks_mut(chunk_len)
        .enumerate()
        .for_each_init(init, |s, (i, c)| f(s, i, c));

    #[cfg(not(feature = "parallel"))]
    {
        let mut s = init();
        for (i, c) in data.chunks_mut(chunk_len).enumerate() {
            f(&mut s, i, c);
        }
    }
}

pub(crate) fn for_each_chunk<T, F>(data: &mut [T], chunk_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    for_each_chunk_init(data, chunk_len, || (), |_, i, c| f(i, c));
}
