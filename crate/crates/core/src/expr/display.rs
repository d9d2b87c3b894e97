//! Canonical text rendering of expressions.  `parse` reads this form back;
//! golden files and reports store expressions this way.

use super::expr::{Body, Expr};
use super::symbols::Symbols;
use super::word::Letter;
use crate::scalar::coeff_abs;
use num_traits::One;

pub fn render_letter(l: &Letter, sy: &Symbols) -> String {
    match l {
        Letter::Gen(g) => sy.name(*g).to_string(),
        Letter::Star(w) => format!("*({})", render_word(w, sy)),
        Letter::DStar(w) => format!("d*({})", render_word(w, sy)),
    }
}

pub fn render_word(w: &[Letter], sy: &Symbols) -> String {
    w.iter().map(|l| render_letter(l, sy)).collect::<Vec<_>>().join(" ")
}

fn render_body(b: &Body, sy: &Symbols) -> Option<String> {
    match b {
        Body::One => None,
        Body::Word(w) => Some(render_word(w, sy)),
        Body::Tr(w) => Some(format!("Tr({})", render_word(w, sy))),
        Body::Bullet(u, v) => {
            Some(format!("B({} ; {})", render_word(u, sy), render_word(v, sy)))
        }
    }
}

/// Render a (normalized) expression to canonical text.
pub fn render(e: &Expr, sy: &Symbols) -> String {
    if e.terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in e.terms.iter().enumerate() {
        let (neg, mag) = coeff_abs(&t.coeff);
        if i == 0 {
            if neg {
                out.push_str("- ");
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let body = render_body(&t.body, sy);
        let coeff_is_plain_one = mag.consts.is_empty() && mag.rat.is_one();
        let mut piece = String::new();
        if !coeff_is_plain_one || body.is_none() {
            if mag.rat.denom().is_one() {
                piece.push_str(&mag.rat.numer().to_string());
            } else {
                piece.push_str(&format!("{}/{}", mag.rat.numer(), mag.rat.denom()));
            }
            for (&c, &e) in &mag.consts {
                let name = &sy.consts[c as usize].name;
                if e == 1 {
                    piece.push_str(&format!(" {name}"));
                } else {
                    piece.push_str(&format!(" {name}^{e}"));
                }
            }
            if body.is_some() {
                piece.push(' ');
            }
        }
        if let Some(b) = body {
            piece.push_str(&b);
        }
        out.push_str(&piece);
    }
    out
}
