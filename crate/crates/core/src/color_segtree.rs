//! Segment tree over a sequence of colors `c_1..c_d`, all initially 0.
//!
//! Supports range assignment of a color, point lookup, and the minimal /
//! maximal colored index inside a range, each in `O(log d)` node visits.
//!
//! The tree is a full binary tree over `[1, 2^h]` with `2^(h-1) < d <= 2^h`,
//! stored as a 1-based heap. Every node carries
//!
//! * `color`: `c >= 1` when its whole segment has color `c`, else 0,
//! * `min` / `max`: extremal colored index of its segment, or the
//!   sentinels `2^h + 1` / `-1`,
//! * an epoch stamp. A node whose stamp differs from the tree's current
//!   epoch reads as blank, so [`ColorSegTree::new_epoch`] erases all colors
//!   in `O(1)`.
//!
//! Node storage is any slice-like container: the default owns a `Vec`,
//! while the engine lays out the trees of all heavy paths in one shared
//! pool and borrows a slice per operation.
//!
//! A node with `color >= 1` is authoritative for its whole segment: the
//! records below it may be stale and are never read until an update pushes
//! the color down. Updates clear `color` on every node they pass through.

use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;

use crate::{Error, Result};

/// One operation of the coloration problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorOp {
    Update { l: usize, r: usize, c: u32 },
    Request { x: usize },
    NearestLow { l: usize, r: usize },
    NearestHigh { l: usize, r: usize },
    NewEpoch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorAnswer {
    Done,
    Color(u32),
    Index(Option<usize>),
}

/// Storage cell of a [`ColorSegTree`].
#[derive(Debug, Clone, Copy)]
pub struct Node {
    color: u32,
    min: i64,
    max: i64,
    epoch: u64,
}

impl Node {
    /// A cell from epoch 0; reads as blank once any later epoch is current.
    pub(crate) const STALE: Node = Node {
        color: 0,
        min: 0,
        max: 0,
        epoch: 0,
    };
}

#[derive(Debug, Clone)]
pub struct ColorSegTree<S = Vec<Node>> {
    d: usize,
    height: u32,
    width: usize,
    max_color: u32,
    nodes: S,
    current_epoch: u64,
    visits: Cell<u64>,
    last_visits: Cell<u64>,
}

impl ColorSegTree {
    /// Builds an uncolored tree of logical length `d` accepting any color
    /// `>= 1`.
    ///
    /// Panics if `d == 0`.
    pub fn new(d: usize) -> ColorSegTree {
        ColorSegTree::with_max_color(d, u32::MAX)
    }

    /// Like [`ColorSegTree::new`] but rejects update colors above `max_color`.
    pub fn with_max_color(d: usize, max_color: u32) -> ColorSegTree {
        assert!(d >= 1, "segment tree length must be positive");
        let width = d.next_power_of_two();
        let height = width.trailing_zeros();
        let blank = Node {
            color: 0,
            min: width as i64 + 1,
            max: -1,
            epoch: 0,
        };
        ColorSegTree {
            d,
            height,
            width,
            max_color,
            nodes: vec![blank; 2 * width],
            current_epoch: 0,
            visits: Cell::new(0),
            last_visits: Cell::new(0),
        }
    }
}

/// Heap slots needed by a tree of logical length `d`, slot 0 unused.
pub(crate) fn slots_for(d: usize) -> usize {
    2 * d.next_power_of_two()
}

impl<'a> ColorSegTree<&'a mut [Node]> {
    /// Tree of length `d` over `nodes` (exactly `slots_for(d)` cells) at
    /// `epoch`. Cells stamped with an older epoch read as blank.
    pub(crate) fn in_pool(nodes: &'a mut [Node], d: usize, max_color: u32, epoch: u64) -> Self {
        debug_assert_eq!(nodes.len(), slots_for(d));
        let width = d.next_power_of_two();
        ColorSegTree {
            d,
            height: width.trailing_zeros(),
            width,
            max_color,
            nodes,
            current_epoch: epoch,
            visits: Cell::new(0),
            last_visits: Cell::new(0),
        }
    }
}

impl<S: AsRef<[Node]>> ColorSegTree<S> {
    /// Logical length `d`.
    pub fn len(&self) -> usize {
        self.d
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `h` with `2^(h-1) < d <= 2^h`.
    pub fn height(&self) -> u32 {
        self.height
    }

    /// Number of tree nodes, `2^(h+1) - 1`.
    pub fn node_count(&self) -> usize {
        self.nodes.as_ref().len() - 1
    }

    pub fn max_color(&self) -> u32 {
        self.max_color
    }

    pub fn current_epoch(&self) -> u64 {
        self.current_epoch
    }

    /// Total node visits since construction.
    pub fn visits(&self) -> u64 {
        self.visits.get()
    }

    /// Node visits of the most recent update or query.
    pub fn last_visits(&self) -> u64 {
        self.last_visits.get()
    }

    /// Upper bound on node visits of a single operation.
    pub fn visit_bound(&self) -> u64 {
        4 * (self.height as u64 + 1)
    }

    /// Logically erases every color.
    pub fn new_epoch(&mut self) -> Result<()> {
        self.current_epoch = self
            .current_epoch
            .checked_add(1)
            .ok_or(Error::EpochOverflow)?;
        Ok(())
    }

    /// Moves the current epoch forward to `epoch`; a no-op when the tree is
    /// already there. Lets several trees share one external epoch counter.
    pub fn advance_to_epoch(&mut self, epoch: u64) {
        if epoch > self.current_epoch {
            self.current_epoch = epoch;
        }
    }

    /// Minimal and maximal colored index of the whole sequence, read from
    /// the root labels.
    pub fn root_extremes(&self) -> (Option<usize>, Option<usize>) {
        let root = self.view(1);
        if root.color >= 1 {
            return (Some(1), Some(self.width));
        }
        let min = (root.min <= self.width as i64).then_some(root.min as usize);
        let max = (root.max >= 1).then_some(root.max as usize);
        (min, max)
    }

    /// Color of element `x`, 0 if uncolored.
    pub fn color_request(&self, x: usize) -> Result<u32> {
        Ok(self.color_request_traced(x)?.0)
    }

    /// Color of element `x` plus the segment `[a, b]` of the node where the
    /// descent stopped. When the color is non-zero every element of that
    /// segment carries it.
    pub fn color_request_traced(&self, x: usize) -> Result<(u32, usize, usize)> {
        self.check_index(x)?;
        let mut visits = 0;
        let found = self.request_walk(x, &mut visits);
        self.record(visits);
        Ok(found)
    }

    fn request_walk(&self, x: usize, visits: &mut u64) -> (u32, usize, usize) {
        let (mut v, mut a, mut b) = (1usize, 1usize, self.width);
        loop {
            *visits += 1;
            let node = self.nodes.as_ref()[v];
            if node.epoch != self.current_epoch {
                return (0, a, b);
            }
            let color = node.color;
            if color >= 1 || a == b {
                return (color, a, b);
            }
            let mid = (a + b) / 2;
            if x <= mid {
                v *= 2;
                b = mid;
            } else {
                v = 2 * v + 1;
                a = mid + 1;
            }
        }
    }

    /// Minimal colored index in `[l, r]`.
    pub fn nearest_colored_low(&self, l: usize, r: usize) -> Result<Option<usize>> {
        self.check_range(l, r)?;
        let mut visits = 0;
        let found = self.low_walk(l, r, &mut visits);
        self.record(visits);
        Ok(found)
    }

    fn low_walk(&self, l: usize, r: usize, visits: &mut u64) -> Option<usize> {
        let (mut v, mut a, mut b) = (1usize, 1usize, self.width);
        loop {
            *visits += 1;
            let node = self.view(v);
            if node.color >= 1 {
                return Some(l);
            }
            if node.min > r as i64 || node.max < l as i64 {
                return None;
            }
            if a == b {
                return Some(a);
            }
            let mid = (a + b) / 2;
            if r <= mid {
                v *= 2;
                b = mid;
            } else if l > mid {
                v = 2 * v + 1;
                a = mid + 1;
            } else {
                if let Some(i) = self.suffix_low(2 * v, a, mid, l, visits) {
                    return Some(i);
                }
                *visits += 1;
                return self.prefix_low(2 * v + 1, mid + 1, r);
            }
        }
    }

    /// Maximal colored index in `[l, r]`.
    pub fn nearest_colored_high(&self, l: usize, r: usize) -> Result<Option<usize>> {
        self.check_range(l, r)?;
        let mut visits = 0;
        let found = self.high_walk(l, r, &mut visits);
        self.record(visits);
        Ok(found)
    }

    fn high_walk(&self, l: usize, r: usize, visits: &mut u64) -> Option<usize> {
        let (mut v, mut a, mut b) = (1usize, 1usize, self.width);
        loop {
            *visits += 1;
            let node = self.view(v);
            if node.color >= 1 {
                return Some(r);
            }
            if node.min > r as i64 || node.max < l as i64 {
                return None;
            }
            if a == b {
                return Some(a);
            }
            let mid = (a + b) / 2;
            if r <= mid {
                v *= 2;
                b = mid;
            } else if l > mid {
                v = 2 * v + 1;
                a = mid + 1;
            } else {
                if let Some(i) = self.prefix_high(2 * v + 1, mid + 1, b, r, visits) {
                    return Some(i);
                }
                *visits += 1;
                return self.suffix_high(2 * v, mid, l);
            }
        }
    }

    /// Minimal colored index in `[l, b]` within the subtree of `v` over `[a, b]`.
    fn suffix_low(
        &self,
        mut v: usize,
        mut a: usize,
        mut b: usize,
        l: usize,
        visits: &mut u64,
    ) -> Option<usize> {
        loop {
            *visits += 1;
            let node = self.view(v);
            if node.color >= 1 {
                return Some(l);
            }
            if node.max < l as i64 {
                return None;
            }
            if a == b {
                return Some(a);
            }
            let mid = (a + b) / 2;
            if l > mid {
                v = 2 * v + 1;
                a = mid + 1;
                continue;
            }
            *visits += 1;
            let left = self.view(2 * v);
            if left.color >= 1 || left.max >= l as i64 {
                v *= 2;
                b = mid;
            } else {
                // Nothing colored in [l, mid]; the answer is the first colored
                // index of the right child, which exists because max(v) >= l.
                *visits += 1;
                return Some(
                    self.prefix_low(2 * v + 1, mid + 1, b)
                        .expect("max label promised a colored index"),
                );
            }
        }
    }

    /// Minimal colored index in `[a, r]` within the subtree of `v` over `[a, ..]`.
    fn prefix_low(&self, v: usize, a: usize, r: usize) -> Option<usize> {
        let node = self.view(v);
        if node.color >= 1 {
            Some(a)
        } else if node.min <= r as i64 {
            Some(node.min as usize)
        } else {
            None
        }
    }

    /// Maximal colored index in `[a, r]` within the subtree of `v` over `[a, b]`.
    fn prefix_high(
        &self,
        mut v: usize,
        mut a: usize,
        mut b: usize,
        r: usize,
        visits: &mut u64,
    ) -> Option<usize> {
        loop {
            *visits += 1;
            let node = self.view(v);
            if node.color >= 1 {
                return Some(r);
            }
            if node.min > r as i64 {
                return None;
            }
            if a == b {
                return Some(a);
            }
            let mid = (a + b) / 2;
            if r <= mid {
                v *= 2;
                b = mid;
                continue;
            }
            *visits += 1;
            let right = self.view(2 * v + 1);
            if right.color >= 1 || right.min <= r as i64 {
                v = 2 * v + 1;
                a = mid + 1;
            } else {
                *visits += 1;
                return Some(
                    self.suffix_high(2 * v, mid, a)
                        .expect("min label promised a colored index"),
                );
            }
        }
    }

    /// Maximal colored index in `[l, b]` within the subtree of `v` over `[.., b]`.
    fn suffix_high(&self, v: usize, b: usize, l: usize) -> Option<usize> {
        let node = self.view(v);
        if node.color >= 1 {
            Some(b)
        } else if node.max >= l as i64 {
            Some(node.max as usize)
        } else {
            None
        }
    }

    #[inline]
    fn view(&self, v: usize) -> Node {
        let node = self.nodes.as_ref()[v];
        if node.epoch == self.current_epoch {
            node
        } else {
            Node {
                color: 0,
                min: self.width as i64 + 1,
                max: -1,
                epoch: self.current_epoch,
            }
        }
    }

    fn record(&self, visits: u64) {
        self.visits.set(self.visits.get() + visits);
        self.last_visits.set(visits);
    }

    fn check_index(&self, x: usize) -> Result<()> {
        if x == 0 || x > self.d {
            Err(Error::IndexOutOfRange {
                index: x,
                len: self.d,
            })
        } else {
            Ok(())
        }
    }

    fn check_range(&self, l: usize, r: usize) -> Result<()> {
        self.check_index(l)?;
        self.check_index(r)?;
        if l > r {
            return Err(Error::IndexOutOfRange {
                index: l,
                len: self.d,
            });
        }
        Ok(())
    }
}

impl<S: AsRef<[Node]> + AsMut<[Node]>> ColorSegTree<S> {
    /// Sets `c_i = c` for `l <= i <= r`.
    ///
    /// Descends to the node where `[l, r]` splits, then colors the suffix
    /// part in the left child and the prefix part in the right child. A
    /// color inherited from a fully colored ancestor is pushed onto the
    /// siblings that leave the descent.
    pub fn color_update(&mut self, l: usize, r: usize, c: u32) -> Result<()> {
        self.check_range(l, r)?;
        if c == 0 || c > self.max_color {
            return Err(Error::ColorOutOfRange {
                color: c,
                max: self.max_color,
            });
        }
        let mut visits = 0;
        let (mut v, mut a, mut b) = (1usize, 1usize, self.width);
        let mut inherited = 0;
        loop {
            visits += 1;
            self.touch(v);
            if inherited == 0 {
                inherited = self.nodes.as_ref()[v].color;
            }
            if l == a && r == b {
                self.paint(v, c, a, b);
                break;
            }
            let mid = (a + b) / 2;
            let node = &mut self.nodes.as_mut()[v];
            node.color = 0;
            if inherited >= 1 {
                node.min = a as i64;
                node.max = b as i64;
            } else {
                node.min = node.min.min(l as i64);
                node.max = node.max.max(r as i64);
            }
            if l > mid {
                if inherited >= 1 {
                    visits += 1;
                    self.paint(2 * v, inherited, a, mid);
                }
                v = 2 * v + 1;
                a = mid + 1;
            } else if r <= mid {
                if inherited >= 1 {
                    visits += 1;
                    self.paint(2 * v + 1, inherited, mid + 1, b);
                }
                v *= 2;
                b = mid;
            } else {
                self.update_suffix(2 * v, a, mid, l, c, inherited, &mut visits);
                self.update_prefix(2 * v + 1, mid + 1, b, r, c, inherited, &mut visits);
                break;
            }
        }
        self.record(visits);
        Ok(())
    }

    /// Colors `[l, b]` inside the subtree of `v` covering `[a, b]`.
    #[allow(clippy::too_many_arguments)]
    fn update_suffix(
        &mut self,
        mut v: usize,
        mut a: usize,
        mut b: usize,
        l: usize,
        c: u32,
        mut inherited: u32,
        visits: &mut u64,
    ) {
        loop {
            *visits += 1;
            self.touch(v);
            if inherited == 0 {
                inherited = self.nodes.as_ref()[v].color;
            }
            if l == a {
                self.paint(v, c, a, b);
                return;
            }
            let mid = (a + b) / 2;
            let node = &mut self.nodes.as_mut()[v];
            node.color = 0;
            node.max = b as i64;
            node.min = if inherited >= 1 {
                a as i64
            } else {
                node.min.min(l as i64)
            };
            if l > mid {
                if inherited >= 1 {
                    *visits += 1;
                    self.paint(2 * v, inherited, a, mid);
                }
                v = 2 * v + 1;
                a = mid + 1;
            } else {
                *visits += 1;
                self.paint(2 * v + 1, c, mid + 1, b);
                v *= 2;
                b = mid;
            }
        }
    }

    /// Colors `[a, r]` inside the subtree of `v` covering `[a, b]`.
    #[allow(clippy::too_many_arguments)]
    fn update_prefix(
        &mut self,
        mut v: usize,
        mut a: usize,
        mut b: usize,
        r: usize,
        c: u32,
        mut inherited: u32,
        visits: &mut u64,
    ) {
        loop {
            *visits += 1;
            self.touch(v);
            if inherited == 0 {
                inherited = self.nodes.as_ref()[v].color;
            }
            if r == b {
                self.paint(v, c, a, b);
                return;
            }
            let mid = (a + b) / 2;
            let node = &mut self.nodes.as_mut()[v];
            node.color = 0;
            node.min = a as i64;
            node.max = if inherited >= 1 {
                b as i64
            } else {
                node.max.max(r as i64)
            };
            if r <= mid {
                if inherited >= 1 {
                    *visits += 1;
                    self.paint(2 * v + 1, inherited, mid + 1, b);
                }
                v *= 2;
                b = mid;
            } else {
                *visits += 1;
                self.paint(2 * v, c, a, mid);
                v = 2 * v + 1;
                a = mid + 1;
            }
        }
    }

    /// Runs one [`ColorOp`].
    pub fn apply(&mut self, op: &ColorOp) -> Result<ColorAnswer> {
        Ok(match *op {
            ColorOp::Update { l, r, c } => {
                self.color_update(l, r, c)?;
                ColorAnswer::Done
            }
            ColorOp::Request { x } => ColorAnswer::Color(self.color_request(x)?),
            ColorOp::NearestLow { l, r } => ColorAnswer::Index(self.nearest_colored_low(l, r)?),
            ColorOp::NearestHigh { l, r } => ColorAnswer::Index(self.nearest_colored_high(l, r)?),
            ColorOp::NewEpoch => {
                self.new_epoch()?;
                ColorAnswer::Done
            }
        })
    }

    #[inline]
    fn touch(&mut self, v: usize) {
        let current = self.current_epoch;
        let blank_min = self.width as i64 + 1;
        let node = &mut self.nodes.as_mut()[v];
        if node.epoch != current {
            *node = Node {
                color: 0,
                min: blank_min,
                max: -1,
                epoch: current,
            };
        }
    }

    #[inline]
    fn paint(&mut self, v: usize, c: u32, a: usize, b: usize) {
        self.nodes.as_mut()[v] = Node {
            color: c,
            min: a as i64,
            max: b as i64,
            epoch: self.current_epoch,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    fn colors(t: &ColorSegTree) -> Vec<u32> {
        (1..=t.len()).map(|x| t.color_request(x).unwrap()).collect()
    }

    #[test]
    fn construct_shapes() {
        let t = ColorSegTree::new(1);
        assert_eq!((t.height(), t.node_count()), (0, 1));
        let t = ColorSegTree::new(5);
        assert_eq!((t.height(), t.node_count()), (3, 15));
        assert_eq!(t.current_epoch(), 0);
        for d in 1..=64usize {
            let t = ColorSegTree::new(d);
            let h = t.height();
            assert!(d <= 1 << h && (h == 0 || (1usize << (h - 1)) < d));
            assert_eq!(t.node_count(), (1 << (h + 1)) - 1);
        }
    }

    #[test]
    fn fresh_tree_is_blank() {
        let t = ColorSegTree::new(8);
        assert!(colors(&t).iter().all(|&c| c == 0));
        assert_eq!(t.nearest_colored_low(1, 8).unwrap(), None);
        assert_eq!(t.nearest_colored_high(3, 5).unwrap(), None);
        assert_eq!(t.root_extremes(), (None, None));
    }

    #[test]
    fn full_range_update() {
        let mut t = ColorSegTree::new(8);
        t.color_update(1, 8, 5).unwrap();
        assert_eq!(colors(&t), [5; 8]);
        let mut t = ColorSegTree::new(6);
        t.color_update(1, 6, 5).unwrap();
        assert_eq!(colors(&t), [5; 6]);
    }

    #[test]
    fn overwrite_pushes_inherited_color() {
        let mut t = ColorSegTree::new(6);
        t.color_update(1, 6, 1).unwrap();
        t.color_update(3, 4, 2).unwrap();
        assert_eq!(colors(&t), [1, 1, 2, 2, 1, 1]);
        assert_eq!(t.nearest_colored_low(1, 6).unwrap(), Some(1));
        assert_eq!(t.nearest_colored_high(1, 6).unwrap(), Some(6));
    }

    #[test]
    fn root_labels_track_extremes() {
        let mut t = ColorSegTree::new(8);
        t.color_update(2, 3, 9).unwrap();
        assert_eq!(t.root_extremes(), (Some(2), Some(3)));
    }

    #[test]
    fn nearest_queries() {
        let mut t = ColorSegTree::new(8);
        t.color_update(4, 4, 1).unwrap();
        assert_eq!(t.nearest_colored_low(1, 8).unwrap(), Some(4));
        let mut t = ColorSegTree::new(8);
        t.color_update(2, 5, 3).unwrap();
        assert_eq!(t.nearest_colored_high(1, 8).unwrap(), Some(5));
        assert_eq!(t.nearest_colored_low(3, 8).unwrap(), Some(3));
        assert_eq!(t.nearest_colored_low(6, 8).unwrap(), None);
        assert_eq!(t.nearest_colored_high(1, 1).unwrap(), None);
    }

    #[test]
    fn suffix_query_skips_colors_left_of_range() {
        // colored {1, 4}; the min colored index in [2, 4] is 4
        let mut t = ColorSegTree::new(4);
        t.color_update(1, 1, 1).unwrap();
        t.color_update(4, 4, 2).unwrap();
        assert_eq!(t.nearest_colored_low(2, 4).unwrap(), Some(4));
        assert_eq!(t.nearest_colored_high(1, 3).unwrap(), Some(1));
    }

    #[test]
    fn epochs_erase() {
        let mut t = ColorSegTree::new(4);
        t.color_update(1, 4, 2).unwrap();
        t.new_epoch().unwrap();
        assert_eq!(t.color_request(2).unwrap(), 0);
        t.new_epoch().unwrap();
        assert_eq!(colors(&t), [0; 4]);
        assert_eq!(t.nearest_colored_low(1, 4).unwrap(), None);
        t.color_update(2, 2, 1).unwrap();
        assert_eq!(colors(&t), [0, 1, 0, 0]);
    }

    #[test]
    fn epoch_overflow_is_reported() {
        let mut t = ColorSegTree::new(2);
        t.advance_to_epoch(u64::MAX);
        assert_eq!(t.new_epoch(), Err(Error::EpochOverflow));
    }

    #[test]
    fn argument_errors() {
        let mut t = ColorSegTree::with_max_color(5, 3);
        assert_eq!(
            t.color_request(0),
            Err(Error::IndexOutOfRange { index: 0, len: 5 })
        );
        assert_eq!(
            t.color_request(6),
            Err(Error::IndexOutOfRange { index: 6, len: 5 })
        );
        assert_eq!(
            t.color_update(3, 2, 1),
            Err(Error::IndexOutOfRange { index: 3, len: 5 })
        );
        assert_eq!(
            t.color_update(1, 2, 0),
            Err(Error::ColorOutOfRange { color: 0, max: 3 })
        );
        assert_eq!(
            t.color_update(1, 2, 4),
            Err(Error::ColorOutOfRange { color: 4, max: 3 })
        );
        assert!(t.nearest_colored_low(2, 7).is_err());
    }
}
