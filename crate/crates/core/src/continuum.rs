//! The continuous graph on the unit cycle: edge maps, segment images and the
//! walk used by forward routing.
//!
//! Images are computed as exact point sets: `image_left(s)` is precisely
//! `{left(y) : y ∈ s}` on the `2^-128` grid, so a discrete edge exists exactly
//! when some grid point of one segment maps into another.

use arrayvec::ArrayVec;

use crate::point::{BitString, UnitPoint};

pub fn left(x: UnitPoint) -> UnitPoint {
    x.left()
}

pub fn right(x: UnitPoint) -> UnitPoint {
    x.right()
}

pub fn backward(x: UnitPoint) -> UnitPoint {
    x.backward()
}

/// Half-open cyclic arc `[start, start + length)`.
///
/// The length is kept as `length - 1` so the full cycle is representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    start: UnitPoint,
    span: u128,
}

impl Segment {
    /// Arc of `length * 2^-128`; `length` must be positive.
    pub fn new(start: UnitPoint, length: u128) -> Self {
        assert!(length > 0, "segments have positive length");
        Segment { start, span: length - 1 }
    }

    pub fn full() -> Self {
        Segment { start: UnitPoint::ZERO, span: u128::MAX }
    }

    /// Arc covering the grid points `first..=last` going forward around the
    /// cycle.
    pub fn from_inclusive(first: UnitPoint, last: UnitPoint) -> Self {
        Segment { start: first, span: last.bits().wrapping_sub(first.bits()) }
    }

    pub fn start(&self) -> UnitPoint {
        self.start
    }

    /// Last grid point inside the arc.
    pub fn last(&self) -> UnitPoint {
        UnitPoint::from_bits(self.start.bits().wrapping_add(self.span))
    }

    /// Exclusive end; wraps to zero for arcs ending at one.
    pub fn end(&self) -> UnitPoint {
        UnitPoint::from_bits(self.start.bits().wrapping_add(self.span).wrapping_add(1))
    }

    /// Length in `2^-128` units, `None` for the full cycle.
    pub fn length(&self) -> Option<u128> {
        self.span.checked_add(1)
    }

    pub fn length_f64(&self) -> f64 {
        (self.span as f64 + 1.0) * 2f64.powi(-128)
    }

    pub fn is_full(&self) -> bool {
        self.span == u128::MAX
    }

    pub fn contains(&self, y: UnitPoint) -> bool {
        y.bits().wrapping_sub(self.start.bits()) <= self.span
    }

    pub fn contains_segment(&self, other: &Segment) -> bool {
        let offset = other.start.bits().wrapping_sub(self.start.bits());
        offset <= self.span && offset.checked_add(other.span).is_some_and(|e| e <= self.span)
    }

    pub fn intersects(&self, other: &Segment) -> bool {
        self.contains(other.start) || other.contains(self.start)
    }

    pub fn wraps(&self) -> bool {
        self.start.bits().checked_add(self.span).is_none()
    }

    /// The arc split at zero into non-wrapping inclusive ranges.
    pub fn pieces(&self) -> ArrayVec<(u128, u128), 2> {
        let mut out = ArrayVec::new();
        let a = self.start.bits();
        match a.checked_add(self.span) {
            Some(last) => out.push((a, last)),
            None => {
                out.push((a, u128::MAX));
                out.push((0, a.wrapping_add(self.span)));
            }
        }
        out
    }
}

fn map_pieces(s: &Segment, f: impl Fn(u128) -> u128) -> ArrayVec<Segment, 2> {
    s.pieces()
        .into_iter()
        .map(|(lo, hi)| Segment::from_inclusive(UnitPoint::from_bits(f(lo)), UnitPoint::from_bits(f(hi))))
        .collect()
}

/// `{left(y) : y ∈ s}`. One arc, or two when `s` straddles zero.
pub fn image_left(s: &Segment) -> ArrayVec<Segment, 2> {
    map_pieces(s, |y| UnitPoint::from_bits(y).left().bits())
}

/// `{right(y) : y ∈ s}`. One arc, or two when `s` straddles zero.
pub fn image_right(s: &Segment) -> ArrayVec<Segment, 2> {
    map_pieces(s, |y| UnitPoint::from_bits(y).right().bits())
}

/// Start at `y` and apply `left`/`right` for each bit of `sigma`, least
/// significant bit first. The result carries `sigma` as its leading bits.
pub fn walk(sigma: &BitString, y: UnitPoint) -> UnitPoint {
    sigma.iter().rev().fold(y, |x, bit| if bit { x.right() } else { x.left() })
}
