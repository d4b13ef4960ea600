//! Precision bookkeeping. A precision of `EXACT` or more means "no truncation".

pub const EXACT: i32 = 1 << 24;

pub fn is_exact(p: i32) -> bool {
    p >= EXACT / 2
}

/// `p + d`, keeping exact precisions exact.
pub fn shift(p: i32, d: i32) -> i32 {
    if is_exact(p) {
        EXACT
    } else {
        p + d
    }
}

/// Sum of two precisions or valuations; anything exact stays exact.
pub fn plus(a: i32, b: i32) -> i32 {
    if is_exact(a) || is_exact(b) {
        EXACT
    } else {
        a + b
    }
}

/// Precision of a product: known up to `min(pa + vb, pb + va)`.
pub fn product(pa: i32, va: i32, pb: i32, vb: i32) -> i32 {
    plus(pa, vb).min(plus(pb, va))
}
