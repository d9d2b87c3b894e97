//! Words: ordered products of letters.  The wedge product is juxtaposition;
//! all sign bookkeeping uses the double Koszul rule (independent signs from
//! the spacetime and variational gradings).

use super::symbols::{Bidegree, GenId, Symbols};
use std::cmp::Ordering;

/// One multiplicative letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Letter {
    Gen(GenId),
    /// Hodge star of a word: opaque linear degree marker p -> dim - p.
    Star(Vec<Letter>),
    /// `d` of a starred word, kept atomic (never expanded by `d`).
    DStar(Vec<Letter>),
}

impl Letter {
    pub fn deg(&self, sy: &Symbols) -> Bidegree {
        match self {
            Letter::Gen(g) => sy.gen(*g).deg,
            Letter::Star(w) => {
                let d = word_deg(w, sy);
                Bidegree::new(sy.dim - d.p, d.q)
            }
            Letter::DStar(w) => {
                let d = word_deg(w, sy);
                Bidegree::new(sy.dim - d.p + 1, d.q)
            }
        }
    }

    /// Letters that commute with everything modulo the Koszul sign.
    pub fn commutes(&self, sy: &Symbols) -> bool {
        match self {
            Letter::Gen(g) => sy.gen(*g).kind.commutes(),
            Letter::Star(w) | Letter::DStar(w) => w.iter().all(|l| l.commutes(sy)),
        }
    }

    /// Total order used by canonicalization (declaration index first).
    pub fn cmp_key(&self, other: &Letter) -> Ordering {
        fn rank(l: &Letter) -> u8 {
            match l {
                Letter::Gen(_) => 0,
                Letter::Star(_) => 1,
                Letter::DStar(_) => 2,
            }
        }
        match (self, other) {
            (Letter::Gen(a), Letter::Gen(b)) => a.cmp(b),
            (Letter::Star(a), Letter::Star(b)) | (Letter::DStar(a), Letter::DStar(b)) => {
                cmp_words(a, b)
            }
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

pub fn cmp_words(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.iter().zip(b.iter()) {
            match x.cmp_key(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

pub fn word_deg(w: &[Letter], sy: &Symbols) -> Bidegree {
    let mut d = Bidegree::new(0, 0);
    for l in w {
        d = d.add(l.deg(sy));
    }
    d
}

fn cancel_pair(a: &Letter, b: &Letter, sy: &Symbols) -> bool {
    match (a, b) {
        (Letter::Gen(a), Letter::Gen(b)) => sy.inverts(*b) == Some(*a) || sy.inverts(*a) == Some(*b),
        _ => false,
    }
}

/// Local word rewrites, applied to a fixpoint:
///   - adjacent group inverses cancel (g g⁻¹ = g⁻¹ g = 1),
///   - commuting letters bubble left into sorted position (with Koszul signs),
///   - star contents hoist boundary 0-form letters out (Hodge is linear over
///     0-forms), keeping at least one letter inside,
///   - star/dstar contents are recursively rewritten.
/// Returns the overall sign; `0` means the term vanished.
pub fn rewrite_word(w: &mut Vec<Letter>, sy: &Symbols) -> i8 {
    let mut sign: i8 = 1;
    loop {
        let mut changed = false;

        // Recurse into star contents; hoist boundary 0-forms out of plain
        // stars (not DStar: the exterior derivative there already acted on
        // the whole content).
        let mut i = 0;
        while i < w.len() {
            let mut hoist_left: Vec<Letter> = Vec::new();
            let mut hoist_right: Vec<Letter> = Vec::new();
            match &mut w[i] {
                Letter::Gen(_) => {}
                Letter::DStar(content) => {
                    let s = rewrite_word(content, sy);
                    if s == 0 {
                        return 0;
                    }
                    sign *= s;
                }
                Letter::Star(content) => {
                    let s = rewrite_word(content, sy);
                    if s == 0 {
                        return 0;
                    }
                    sign *= s;
                    while content.len() > 1 && content.first().unwrap().deg(sy).p == 0 {
                        hoist_left.push(content.remove(0));
                    }
                    while content.len() > 1 && content.last().unwrap().deg(sy).p == 0 {
                        hoist_right.push(content.pop().unwrap());
                    }
                    hoist_right.reverse();
                }
            }
            if !hoist_left.is_empty() || !hoist_right.is_empty() {
                changed = true;
                let nl = hoist_left.len();
                for (k, l) in hoist_left.into_iter().enumerate() {
                    w.insert(i + k, l);
                }
                i += nl;
                let mut j = i + 1;
                for l in hoist_right {
                    w.insert(j, l);
                    j += 1;
                }
            }
            i += 1;
        }

        // Adjacent group-inverse cancellation.
        let mut i = 0;
        while w.len() >= 2 && i + 1 < w.len() {
            if cancel_pair(&w[i], &w[i + 1], sy) {
                w.remove(i);
                w.remove(i);
                changed = true;
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }

        // Equal adjacent commuting letters with an odd Koszul swap sign
        // square to zero (commuting-valued odd forms).
        for i in 0..w.len().saturating_sub(1) {
            if w[i] == w[i + 1] && w[i].commutes(sy) {
                let d = w[i].deg(sy);
                if d.swap_sign(d) < 0 {
                    return 0;
                }
            }
        }

        // Commuting letters bubble left (insertion sort with Koszul signs).
        let mut i = 1;
        while i < w.len() {
            if w[i].commutes(sy) {
                let mut j = i;
                while j > 0 {
                    let should_swap = if w[j - 1].commutes(sy) {
                        w[j].cmp_key(&w[j - 1]) == Ordering::Less
                    } else {
                        true
                    };
                    if should_swap {
                        sign *= w[j].deg(sy).swap_sign(w[j - 1].deg(sy));
                        w.swap(j - 1, j);
                        j -= 1;
                        changed = true;
                    } else {
                        break;
                    }
                }
            }
            i += 1;
        }

        if !changed {
            return sign;
        }
    }
}

/// Cyclic (wraparound) group-inverse cancellation for trace words.
/// Returns the net sign; `0` means the term vanished.
pub fn tr_wraparound_cancel(w: &mut Vec<Letter>, sy: &Symbols) -> i8 {
    let mut sign = 1i8;
    loop {
        if w.len() < 2 {
            return sign;
        }
        if !cancel_pair(w.first().unwrap(), w.last().unwrap(), sy) {
            return sign;
        }
        // Rotate the last letter to the front (graded sign), then cancel.
        let last_deg = w.last().unwrap().deg(sy);
        let rest_deg = word_deg(&w[..w.len() - 1], sy);
        sign *= last_deg.swap_sign(rest_deg);
        let l = w.pop().unwrap();
        w.insert(0, l);
        w.remove(0);
        w.remove(0);
        let s = rewrite_word(w, sy);
        if s == 0 {
            return 0;
        }
        sign *= s;
    }
}
