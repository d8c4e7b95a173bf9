//! Concurrent frontier containers shared by the traversal kernels.

use std::sync::atomic::{AtomicU32, AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::graph::NodeId;

/// Fixed-size bitmap with atomic bit setting.
pub(crate) struct Bitmap {
    words: Vec<AtomicU64>,
}

impl Bitmap {
    pub(crate) fn new(len: usize) -> Self {
        Self {
            words: (0..len.div_ceil(64)).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    pub(crate) fn reset(&self) {
        self.words
            .par_iter()
            .with_min_len(1024)
            .for_each(|w| w.store(0, Ordering::Relaxed));
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        self.words[i / 64].load(Ordering::Relaxed) & (1 << (i % 64)) != 0
    }

    #[inline]
    pub(crate) fn set(&self, i: usize) {
        self.words[i / 64].fetch_or(1 << (i % 64), Ordering::Relaxed);
    }

    /// Word `w` holds bits `64 w .. 64 w + 63`.
    pub(crate) fn words(&self) -> &[AtomicU64] {
        &self.words
    }
}

/// Append-only queue read one window at a time.
///
/// Workers append through [`LocalBuffer`]s while the current window is
/// being read; [`SlidingQueue::slide`] then makes everything appended since
/// the last slide the new window. Each vertex is enqueued at most once per
/// traversal, so capacity `n` suffices.
pub(crate) struct SlidingQueue {
    items: Vec<AtomicU32>,
    tail: AtomicUsize,
    start: usize,
    end: usize,
}

impl SlidingQueue {
    pub(crate) fn with_capacity(capacity: usize) -> Self {
        Self {
            items: (0..capacity).map(|_| AtomicU32::new(0)).collect(),
            tail: AtomicUsize::new(0),
            start: 0,
            end: 0,
        }
    }

    pub(crate) fn push(&mut self, v: NodeId) {
        let at = *self.tail.get_mut();
        *self.items[at].get_mut() = v;
        *self.tail.get_mut() = at + 1;
    }

    pub(crate) fn slide(&mut self) {
        self.start = self.end;
        self.end = *self.tail.get_mut();
    }

    pub(crate) fn window(&self) -> &[AtomicU32] {
        &self.items[self.start..self.end]
    }

    /// Everything enqueued so far, including past windows.
    pub(crate) fn all(&self) -> &[AtomicU32] {
        &self.items[..self.end]
    }

    pub(crate) fn window_start(&self) -> usize {
        self.start
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub(crate) fn len(&self) -> usize {
        self.end - self.start
    }

    pub(crate) fn clear(&mut self) {
        *self.tail.get_mut() = 0;
        self.start = 0;
        self.end = 0;
    }

    fn append(&self, batch: &[NodeId]) {
        let at = self.tail.fetch_add(batch.len(), Ordering::Relaxed);
        for (slot, &v) in self.items[at..at + batch.len()].iter().zip(batch) {
            slot.store(v, Ordering::Relaxed);
        }
    }
}

const LOCAL_BUFFER_LEN: usize = 16 * 1024;

/// Worker-private staging buffer that appends to a [`SlidingQueue`] in bulk.
/// Flushes when full and on drop.
pub(crate) struct LocalBuffer<'q> {
    queue: &'q SlidingQueue,
    buf: Vec<NodeId>,
}

impl<'q> LocalBuffer<'q> {
    pub(crate) fn new(queue: &'q SlidingQueue) -> Self {
        Self {
            queue,
            buf: Vec::new(),
        }
    }

    #[inline]
    pub(crate) fn push(&mut self, v: NodeId) {
        if self.buf.len() == LOCAL_BUFFER_LEN {
            self.flush();
        }
        self.buf.push(v);
    }

    fn flush(&mut self) {
        self.queue.append(&self.buf);
        self.buf.clear();
    }
}

impl Drop for LocalBuffer<'_> {
    fn drop(&mut self) {
        if !self.buf.is_empty() {
            self.flush();
        }
    }
}
