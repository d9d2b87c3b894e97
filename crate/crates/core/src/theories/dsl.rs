//! The `.theory` declaration format: a line-oriented, declarative grammar
//! with sections for generators, rules, sectors, dressings, oracle hints and
//! golden expectations.  Versioned with the header line `theory-dsl v1`.

use super::theory::{Dressing, OracleRule, Sector, SpecialOracle, Theory};
use crate::expr::{parse as parse_expr, Bidegree, Derived, Expr, GenKind, Symbols};
use crate::scalar::{Coeff, ConstKind};
use thiserror::Error;

#[derive(Debug, Error)]
#[error("{file}:{line}: {msg}")]
pub struct DslError {
    pub file: String,
    pub line: usize,
    pub msg: String,
}

struct Ctx<'a> {
    file: &'a str,
    line: usize,
}

impl<'a> Ctx<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        Err(DslError { file: self.file.to_string(), line: self.line, msg: msg.into() })
    }
}

fn parse_bidegree(s: &str, cx: &Ctx) -> Result<Bidegree, DslError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| DslError {
            file: cx.file.into(),
            line: cx.line,
            msg: format!("expected bidegree `(p,q)`, found `{t}`"),
        })?;
    let mut it = inner.split(',');
    let p = it.next().unwrap_or("").trim().parse::<i32>();
    let q = it.next().unwrap_or("").trim().parse::<i32>();
    match (p, q) {
        (Ok(p), Ok(q)) => Ok(Bidegree::new(p, q)),
        _ => cx.err(format!("malformed bidegree `{t}`")),
    }
}

/// A bare coefficient: `[-] [num[/den]] [const]*`, e.g. `- eps il2`.
fn parse_coeff(s: &str, sy: &Symbols, cx: &Ctx) -> Result<Coeff, DslError> {
    let e = parse_expr(s, sy)
        .map_err(|er| DslError { file: cx.file.into(), line: cx.line, msg: er.to_string() })?;
    if e.terms.len() != 1 || !matches!(e.terms[0].body, crate::expr::Body::One) {
        return cx.err(format!("expected a scalar coefficient, found `{s}`"));
    }
    Ok(e.terms[0].coeff.clone())
}

fn expr_pub(s: &str, sy: &Symbols, cx: &Ctx) -> Result<Expr, DslError> {
    parse_expr(s, sy)
        .map_err(|er| DslError { file: cx.file.into(), line: cx.line, msg: er.to_string() })
}

/// Parse one `.theory` source into a validated `Theory`.
pub fn parse_theory(src: &str, file: &str) -> Result<Theory, DslError> {
    let mut lines: Vec<(usize, String)> = Vec::new();
    {
        // join continuation lines ending with a backslash
        let mut pending: Option<(usize, String)> = None;
        for (i, raw) in src.lines().enumerate() {
            let no_comment = match raw.find('#') {
                Some(j) => &raw[..j],
                None => raw,
            };
            let t = no_comment.trim_end();
            if t.trim().is_empty() {
                continue;
            }
            let (cont, body) = match t.strip_suffix('\\') {
                Some(b) => (true, b.trim_end().to_string()),
                None => (false, t.to_string()),
            };
            match pending.take() {
                Some((l0, mut acc)) => {
                    acc.push(' ');
                    acc.push_str(body.trim());
                    if cont {
                        pending = Some((l0, acc));
                    } else {
                        lines.push((l0, acc));
                    }
                }
                None => {
                    if cont {
                        pending = Some((i + 1, body));
                    } else {
                        lines.push((i + 1, body));
                    }
                }
            }
        }
        if let Some((l0, acc)) = pending {
            lines.push((l0, acc));
        }
    }

    let mut it = lines.into_iter().peekable();
    // header
    {
        let cx = Ctx { file, line: 0 };
        match it.next() {
            Some((_, h)) if h.trim() == "theory-dsl v1" => {}
            Some((l, h)) => {
                return Ctx { file, line: l }.err(format!(
                    "expected header `theory-dsl v1`, found `{}`",
                    h.trim()
                ))
            }
            None => return cx.err("empty theory source"),
        }
    }

    let mut th = Theory::new("", 0);
    th.sy.add_const("lin", ConstKind::Nilpotent);

    #[derive(Clone, PartialEq)]
    enum Section {
        None,
        Theory,
        Constants,
        Generators,
        Groups,
        RulesD,
        RulesVd,
        Lagrangian,
        Sector(String),
        Dressing(String),
        OnShell,
        Normal,
        Metric,
        Oracle,
        Golden,
    }
    let mut section = Section::None;

    while let Some((lineno, line)) = it.next() {
        let cx = Ctx { file, line: lineno };
        let t = line.trim();
        if t.starts_with('[') {
            let name = t
                .strip_prefix('[')
                .and_then(|x| x.strip_suffix(']'))
                .ok_or_else(|| DslError {
                    file: file.into(),
                    line: lineno,
                    msg: format!("malformed section header `{t}`"),
                })?;
            section = match name {
                "theory" => Section::Theory,
                "constants" => Section::Constants,
                "generators" => Section::Generators,
                "groups" => Section::Groups,
                "rules.d" => Section::RulesD,
                "rules.vd" => Section::RulesVd,
                "lagrangian" => Section::Lagrangian,
                "onshell" => Section::OnShell,
                "normal" => Section::Normal,
                "metric" => Section::Metric,
                "oracle" => Section::Oracle,
                "golden" => Section::Golden,
                other => {
                    if let Some(s) = other.strip_prefix("sector.") {
                        let sec = Sector {
                            name: s.to_string(),
                            params: [0, 0],
                            param3: None,
                            group: None,
                            additive: None,
                            group2: None,
                            additive2: None,
                            finite: Default::default(),
                            finite_tr: Default::default(),
                            vert: Default::default(),
                            insertion: vec![],
                            self_bracket: None,
                            cross: Default::default(),
                            stripped: false,
                            cocycle: None,
                            abelian: false,
                            expect_trivial: false,
                        };
                        th.sectors.insert(s.to_string(), sec);
                        th.sector_order.push(s.to_string());
                        Section::Sector(s.to_string())
                    } else if let Some(d) = other.strip_prefix("dressing.") {
                        let dr = Dressing {
                            name: d.to_string(),
                            kills: String::new(),
                            stripped: false,
                            group: None,
                            additive: None,
                            table: Default::default(),
                            table_tr: Default::default(),
                            vert_killed: Default::default(),
                            residual2_params: None,
                            residual2_vert: Default::default(),
                            residual1: None,
                        };
                        th.dressings.insert(d.to_string(), dr);
                        th.dressing_order.push(d.to_string());
                        Section::Dressing(d.to_string())
                    } else {
                        return cx.err(format!("unknown section `[{other}]`"));
                    }
                }
            };
            continue;
        }

        // entry lines: `key = value` or bare declarations
        let (key, value) = match t.split_once('=') {
            Some((k, v)) => (k.trim().to_string(), v.trim().to_string()),
            None => (t.to_string(), String::new()),
        };

        match &section {
            Section::None => return cx.err("entry before any section"),
            Section::Theory => match key.as_str() {
                "id" => th.id = value,
                "dim" => {
                    th.dim = value
                        .parse()
                        .map_err(|_| DslError {
                            file: file.into(),
                            line: lineno,
                            msg: format!("bad dimension `{value}`"),
                        })?;
                    th.sy.dim = th.dim;
                }
                "oracle-matrix" => {
                    th.oracle_matrix_dim = value.parse().map_err(|_| DslError {
                        file: file.into(),
                        line: lineno,
                        msg: format!("bad oracle-matrix `{value}`"),
                    })?;
                }
                other => return cx.err(format!("unknown theory key `{other}`")),
            },
            Section::Constants => {
                // `name : free|sign`
                let (name, kind) = match key.split_once(':') {
                    Some((n, k)) => (n.trim(), k.trim()),
                    None => (key.as_str(), "free"),
                };
                let kind = match kind {
                    "free" => ConstKind::Free,
                    "sign" => ConstKind::Sign,
                    other => return cx.err(format!("unknown constant kind `{other}`")),
                };
                th.sy.add_const(name, kind);
            }
            Section::Generators => {
                // `name : kind (p,q) [flags...]`
                let (name, rest) = match key.split_once(':') {
                    Some((n, r)) => (n.trim(), r.trim()),
                    None => return cx.err("generator line needs `name : kind (p,q)`"),
                };
                let mut words: Vec<&str> = rest.split_whitespace().collect();
                if words.is_empty() {
                    return cx.err("missing generator kind");
                }
                let kind_word = words.remove(0);
                let mut flags: Vec<&str> = Vec::new();
                let mut degree: Option<Bidegree> = None;
                for w in words {
                    if w.starts_with('(') {
                        degree = Some(parse_bidegree(w, &cx)?);
                    } else {
                        flags.push(w);
                    }
                }
                let deg = degree.ok_or_else(|| DslError {
                    file: file.into(),
                    line: lineno,
                    msg: "missing bidegree".into(),
                })?;
                let kind = if let Some(alg) = kind_word
                    .strip_prefix("lie(")
                    .and_then(|x| x.strip_suffix(')'))
                {
                    GenKind::Lie {
                        algebra: alg.to_string(),
                        commuting: flags.contains(&"commuting"),
                    }
                } else if kind_word == "matrix" {
                    GenKind::Matrix { symmetric: flags.contains(&"symmetric") }
                } else if kind_word == "scalar" {
                    GenKind::Scalar
                } else {
                    return cx.err(format!("unknown generator kind `{kind_word}`"));
                };
                let g = th.sy.add_gen(name, deg, kind, Derived::Base);
                th.oracle.insert(g, OracleRule::Assign);
                if flags.contains(&"basis") {
                    let (v, dv) = th.add_var_letters(g);
                    th.oracle.insert(v, OracleRule::AssignVar);
                    th.oracle.insert(dv, OracleRule::ComputeD(v));
                }
                if flags.contains(&"varbasis") {
                    th.var_basis.push(g);
                    th.oracle.insert(g, OracleRule::AssignVar);
                    // closure defaults: δ of a variational composite is zero
                    // unless declared in [rules.vd]
                }
                if flags.contains(&"param") {
                    // infinitesimal parameter: d-letter + trivial rules
                    let info_kind = th.sy.gen(g).kind.clone();
                    let dp = th.sy.add_gen(
                        &format!("d{name}"),
                        Bidegree::new(deg.p + 1, deg.q),
                        info_kind,
                        Derived::D(g),
                    );
                    th.d_rules.insert(g, Expr::gen(dp));
                    th.d_rules.insert(dp, Expr::zero());
                    th.vd_rules.insert(g, Expr::zero());
                    th.vd_rules.insert(dp, Expr::zero());
                    th.oracle.insert(dp, OracleRule::ComputeD(g));
                }
            }
            Section::Groups => {
                // `name : GROUPTAG`
                let (name, tag) = match key.split_once(':') {
                    Some((n, g)) => (n.trim(), g.trim()),
                    None => return cx.err("group line needs `name : GROUP`"),
                };
                th.add_group(name, tag);
            }
            Section::RulesD | Section::RulesVd => {
                let sy = th.sy.clone();
                let g = match sy.lookup(&key) {
                    Some(g) => g,
                    None => return cx.err(format!("rule for unknown generator `{key}`")),
                };
                let e = expr_pub(&value, &sy, &cx)?;
                if matches!(section, Section::RulesD) {
                    th.d_rules.insert(g, e);
                } else {
                    th.vd_rules.insert(g, e);
                }
            }
            Section::Lagrangian => {
                if key != "L" {
                    return cx.err("lagrangian section expects `L = ...`");
                }
                let sy = th.sy.clone();
                th.lagrangian = expr_pub(&value, &sy, &cx)?;
            }
            Section::Sector(name) => {
                let name = name.clone();
                handle_sector_line(&mut th, &name, &key, &value, &cx)?;
            }
            Section::Dressing(name) => {
                let name = name.clone();
                handle_dressing_line(&mut th, &name, &key, &value, &cx)?;
            }
            Section::OnShell | Section::Normal => {
                let sy = th.sy.clone();
                if key == "kill" {
                    let e = expr_pub(&value, &sy, &cx)?;
                    if matches!(section, Section::Normal) {
                        th.normal_kills.push(e);
                    } else {
                        return cx.err("kill entries are only supported in [normal]");
                    }
                    continue;
                }
                let g = match sy.lookup(&key) {
                    Some(g) => g,
                    None => return cx.err(format!("substitution for unknown generator `{key}`")),
                };
                let e = expr_pub(&value, &sy, &cx)?;
                if matches!(section, Section::OnShell) {
                    th.on_shell.insert(g, e);
                } else {
                    th.normal.insert(g, e);
                }
            }
            Section::Metric => {
                let sy = th.sy.clone();
                if key == "scale" {
                    match sy.consts_by_name.get(value.trim()) {
                        Some(&c) => th.metric_scale = Some(c),
                        None => return cx.err(format!("unknown constant `{value}`")),
                    }
                    continue;
                }
                let from = match sy.lookup(&key) {
                    Some(g) => g,
                    None => return cx.err(format!("unknown generator `{key}`")),
                };
                let to = match sy.lookup(value.trim()) {
                    Some(g) => g,
                    None => return cx.err(format!("unknown generator `{value}`")),
                };
                th.metric_map.insert(from, to);
            }
            Section::Oracle => {
                let sy = th.sy.clone();
                let g = match sy.lookup(&key) {
                    Some(g) => g,
                    None => return cx.err(format!("oracle rule for unknown generator `{key}`")),
                };
                let rule = if let Some(rest) = value.strip_prefix("compute ") {
                    OracleRule::Compute(expr_pub(rest, &sy, &cx)?)
                } else if let Some(rest) = value.strip_prefix("special ") {
                    let sp = match rest.trim() {
                        "eeT" => SpecialOracle::EeT,
                        "deeT" => SpecialOracle::DeeT,
                        "TeeT" => SpecialOracle::TeeT,
                        "dTeeT" => SpecialOracle::DTeeT,
                        other => {
                            if let Some(inner) =
                                other.strip_prefix("curv(").and_then(|x| x.strip_suffix(')'))
                            {
                                match sy.lookup(inner.trim()) {
                                    Some(h) => SpecialOracle::CurvOf(h),
                                    None => {
                                        return cx
                                            .err(format!("unknown generator `{}`", inner.trim()))
                                    }
                                }
                            } else if let Some(inner) =
                                other.strip_prefix("covd(").and_then(|x| x.strip_suffix(')'))
                            {
                                let mut parts = inner.split(',');
                                let field = parts.next().unwrap_or("").trim();
                                let conn = parts.next().unwrap_or("").trim();
                                match (sy.lookup(field), sy.lookup(conn)) {
                                    (Some(f), Some(c)) => SpecialOracle::CovDAdj(f, c),
                                    _ => {
                                        return cx.err(format!(
                                            "unknown generators in covd({inner})"
                                        ))
                                    }
                                }
                            } else {
                                return cx.err(format!("unknown special oracle `{other}`"));
                            }
                        }
                    };
                    OracleRule::Special(sp)
                } else if value == "assign" {
                    OracleRule::Assign
                } else if value == "assign-var" {
                    OracleRule::AssignVar
                } else {
                    return cx.err(format!("unknown oracle rule `{value}`"));
                };
                th.oracle.insert(g, rule);
            }
            Section::Golden => {
                th.golden.insert(key, value);
            }
        }
    }

    close_tables(&mut th).map_err(|m| DslError { file: file.into(), line: 0, msg: m })?;
    th.check_closure().map_err(|m| DslError { file: file.into(), line: 0, msg: m })?;
    Ok(th)
}

/// Complete finite-GT and dressing tables under d and δ: substitution
/// commutes with both derivatives for full-sandwich tables, so the rule for
/// dX (δX) is the derivative of the rule for X.  Stripped tables opt out
/// and must declare their variational entries explicitly.
fn close_tables(th: &mut Theory) -> Result<(), String> {
    use crate::calculus::{exterior_d, variational_d};
    for _ in 0..4 {
        let mut additions: Vec<(String, bool, crate::expr::GenId, Expr)> = Vec::new();
        let snapshot = th.clone();
        for (sname, sector) in &snapshot.sectors {
            for (&g, rule) in &sector.finite_tr {
                for (i, info) in snapshot.sy.gens.iter().enumerate() {
                    let id = i as crate::expr::GenId;
                    let derived_of = match info.derived {
                        Derived::D(b) => Some((b, true)),
                        Derived::Var(b) => Some((b, false)),
                        _ => None,
                    };
                    if derived_of.map(|(b, _)| b) == Some(g)
                        && !sector.finite_tr.contains_key(&id)
                    {
                        let (_, is_d) = derived_of.unwrap();
                        let de = if is_d {
                            exterior_d(rule, &snapshot).map_err(|e| e.to_string())?
                        } else {
                            variational_d(rule, &snapshot).map_err(|e| e.to_string())?
                        };
                        additions.push((format!("tr:{sname}"), true, id, de));
                    }
                }
            }
            if sector.stripped {
                continue;
            }
            for (&g, rule) in &sector.finite {
                for (i, info) in snapshot.sy.gens.iter().enumerate() {
                    let id = i as crate::expr::GenId;
                    let derived_of = match info.derived {
                        Derived::D(b) => Some((b, true)),
                        Derived::Var(b) => Some((b, false)),
                        _ => None,
                    };
                    if derived_of.map(|(b, _)| b) == Some(g)
                        && !sector.finite.contains_key(&id)
                    {
                        let (_, is_d) = derived_of.unwrap();
                        let de = if is_d {
                            exterior_d(rule, &snapshot).map_err(|e| e.to_string())?
                        } else {
                            variational_d(rule, &snapshot).map_err(|e| e.to_string())?
                        };
                        additions.push((sname.clone(), true, id, de));
                    }
                }
            }
        }
        for (dname, dr) in &snapshot.dressings {
            for (&g, rule) in &dr.table_tr {
                for (i, info) in snapshot.sy.gens.iter().enumerate() {
                    let id = i as crate::expr::GenId;
                    let derived_of = match info.derived {
                        Derived::D(b) => Some((b, true)),
                        Derived::Var(b) => Some((b, false)),
                        _ => None,
                    };
                    if derived_of.map(|(b, _)| b) == Some(g) && !dr.table_tr.contains_key(&id) {
                        let (_, is_d) = derived_of.unwrap();
                        let de = if is_d {
                            exterior_d(rule, &snapshot).map_err(|e| e.to_string())?
                        } else {
                            variational_d(rule, &snapshot).map_err(|e| e.to_string())?
                        };
                        additions.push((format!("tr:{dname}"), false, id, de));
                    }
                }
            }
            if dr.stripped {
                continue;
            }
            for (&g, rule) in &dr.table {
                for (i, info) in snapshot.sy.gens.iter().enumerate() {
                    let id = i as crate::expr::GenId;
                    let derived_of = match info.derived {
                        Derived::D(b) => Some((b, true)),
                        Derived::Var(b) => Some((b, false)),
                        _ => None,
                    };
                    if derived_of.map(|(b, _)| b) == Some(g) && !dr.table.contains_key(&id) {
                        let (_, is_d) = derived_of.unwrap();
                        let de = if is_d {
                            exterior_d(rule, &snapshot).map_err(|e| e.to_string())?
                        } else {
                            variational_d(rule, &snapshot).map_err(|e| e.to_string())?
                        };
                        additions.push((dname.clone(), false, id, de));
                    }
                }
            }
        }
        if additions.is_empty() {
            return Ok(());
        }
        for (name, is_sector, id, e) in additions {
            if is_sector {
                if let Some(n) = name.strip_prefix("tr:") {
                    th.sectors.get_mut(n).unwrap().finite_tr.insert(id, e);
                } else {
                    th.sectors.get_mut(&name).unwrap().finite.insert(id, e);
                }
            } else if let Some(n) = name.strip_prefix("tr:") {
                th.dressings.get_mut(n).unwrap().table_tr.insert(id, e);
            } else {
                th.dressings.get_mut(&name).unwrap().table.insert(id, e);
            }
        }
    }
    Ok(())
}

fn handle_sector_line(
    th: &mut Theory,
    sector: &str,
    key: &str,
    value: &str,
    cx: &Ctx,
) -> Result<(), DslError> {
    if key == "params" {
        // `params = chi eta : su [commuting]`
        let (names, alg) = match value.split_once(':') {
            Some((n, a)) => (n.trim(), a.trim()),
            None => return cx.err("params line needs `names : algebra`"),
        };
        let mut alg_words = alg.split_whitespace();
        let algebra = alg_words.next().unwrap_or("su").to_string();
        let commuting = alg_words.any(|w| w == "commuting");
        let names: Vec<&str> = names.split_whitespace().collect();
        if names.len() < 2 || names.len() > 3 {
            return cx.err("two or three parameter names required");
        }
        let p0 = th.add_param(names[0], &algebra, commuting);
        let p1 = th.add_param(names[1], &algebra, commuting);
        let p2 = names.get(2).map(|n| th.add_param(n, &algebra, commuting));
        let sec = th.sectors.get_mut(sector).unwrap();
        sec.params = [p0, p1];
        sec.param3 = p2;
        return Ok(());
    }
    if key == "group" {
        let names: Vec<&str> = value.split_whitespace().collect();
        let gl = match th.sy.lookup(names[0]) {
            Some(_) => return cx.err(format!("group `{}` already declared", names[0])),
            None => th.add_group(names[0], "G"),
        };
        th.sectors.get_mut(sector).unwrap().group = Some(gl);
        return Ok(());
    }
    if key == "group2" {
        let gl = th.add_group(value.trim(), "G");
        th.sectors.get_mut(sector).unwrap().group2 = Some(gl);
        return Ok(());
    }
    if key == "additive2" {
        let (name, alg) = match value.split_once(':') {
            Some((n, a)) => (n.trim(), a.trim()),
            None => return cx.err("additive2 line needs `name : algebra`"),
        };
        let mut words = alg.split_whitespace();
        let algebra = words.next().unwrap_or("herm").to_string();
        let commuting = words.any(|w| w == "commuting");
        let ap = th.add_additive(name, &algebra, commuting);
        th.sectors.get_mut(sector).unwrap().additive2 = Some(ap);
        return Ok(());
    }
    if key == "additive" {
        let (name, alg) = match value.split_once(':') {
            Some((n, a)) => (n.trim(), a.trim()),
            None => return cx.err("additive line needs `name : algebra`"),
        };
        let mut words = alg.split_whitespace();
        let algebra = words.next().unwrap_or("herm").to_string();
        let commuting = words.any(|w| w == "commuting");
        let ap = th.add_additive(name, &algebra, commuting);
        th.sectors.get_mut(sector).unwrap().additive = Some(ap);
        return Ok(());
    }
    if key == "abelian" {
        th.sectors.get_mut(sector).unwrap().abelian = true;
        return Ok(());
    }
    if key == "conjugation-stripped" {
        th.sectors.get_mut(sector).unwrap().stripped = true;
        return Ok(());
    }
    if key == "cocycle-trivial" {
        th.sectors.get_mut(sector).unwrap().expect_trivial = true;
        return Ok(());
    }
    if let Some(other) = key.strip_prefix("cross.") {
        let (target, coeff) = match value.split_once(':') {
            Some((t, c)) => (t.trim().to_string(), c.trim().to_string()),
            None => (value.trim().to_string(), "1".to_string()),
        };
        let c = parse_coeff(&coeff, &th.sy, cx)?;
        th.sectors
            .get_mut(sector)
            .unwrap()
            .cross
            .insert(other.to_string(), (target, c));
        return Ok(());
    }
    if key == "insert" {
        let sy = th.sy.clone();
        let mut ids = Vec::new();
        for n in value.split_whitespace() {
            match sy.lookup(n) {
                Some(g) => ids.push(g),
                None => return cx.err(format!("unknown generator `{n}`")),
            }
        }
        th.sectors.get_mut(sector).unwrap().insertion = ids;
        return Ok(());
    }
    if key == "bracket" {
        // `bracket = target [: coeff]`
        let (target, coeff) = match value.split_once(':') {
            Some((t, c)) => (t.trim().to_string(), c.trim().to_string()),
            None => (value.trim().to_string(), "1".to_string()),
        };
        let c = parse_coeff(&coeff, &th.sy, cx)?;
        th.sectors.get_mut(sector).unwrap().self_bracket = Some((target, c));
        return Ok(());
    }
    if key == "cocycle" {
        let sy = th.sy.clone();
        let e = expr_pub(value, &sy, cx)?;
        th.sectors.get_mut(sector).unwrap().cocycle = Some(e);
        return Ok(());
    }
    if let Some(gen_name) = key.strip_prefix("finite-tr.") {
        let sy = th.sy.clone();
        let g = sy
            .lookup(gen_name)
            .ok_or_else(|| DslError {
                file: cx.file.into(),
                line: cx.line,
                msg: format!("finite-tr rule for unknown generator `{gen_name}`"),
            })?;
        let e = expr_pub(value, &sy, cx)?;
        th.sectors.get_mut(sector).unwrap().finite_tr.insert(g, e);
        return Ok(());
    }
    if let Some(gen_name) = key.strip_prefix("finite.") {
        let sy = th.sy.clone();
        let g = sy
            .lookup(gen_name)
            .ok_or_else(|| DslError {
                file: cx.file.into(),
                line: cx.line,
                msg: format!("finite rule for unknown generator `{gen_name}`"),
            })?;
        let e = expr_pub(value, &sy, cx)?;
        th.sectors.get_mut(sector).unwrap().finite.insert(g, e);
        return Ok(());
    }
    if let Some(gen_name) = key.strip_prefix("vert.") {
        let sy = th.sy.clone();
        let g = sy
            .lookup(gen_name)
            .ok_or_else(|| DslError {
                file: cx.file.into(),
                line: cx.line,
                msg: format!("vert rule for unknown generator `{gen_name}`"),
            })?;
        let e = expr_pub(value, &sy, cx)?;
        th.sectors.get_mut(sector).unwrap().vert.insert(g, e);
        return Ok(());
    }
    cx.err(format!("unknown sector key `{key}`"))
}

fn handle_dressing_line(
    th: &mut Theory,
    dressing: &str,
    key: &str,
    value: &str,
    cx: &Ctx,
) -> Result<(), DslError> {
    match key {
        "kills" => {
            th.dressings.get_mut(dressing).unwrap().kills = value.to_string();
            Ok(())
        }
        "conjugation-stripped" => {
            th.dressings.get_mut(dressing).unwrap().stripped = true;
            Ok(())
        }
        "residual1" => {
            th.dressings.get_mut(dressing).unwrap().residual1 = Some(value.to_string());
            Ok(())
        }
        "group" => {
            let gl = th.add_group(value.trim(), "G");
            th.dressings.get_mut(dressing).unwrap().group = Some(gl);
            Ok(())
        }
        "additive" => {
            let (name, alg) = match value.split_once(':') {
                Some((n, a)) => (n.trim(), a.trim()),
                None => return cx.err("additive line needs `name : algebra`"),
            };
            let mut words = alg.split_whitespace();
            let algebra = words.next().unwrap_or("herm").to_string();
            let commuting = words.any(|w| w == "commuting");
            let ap = th.add_additive(name, &algebra, commuting);
            th.dressings.get_mut(dressing).unwrap().additive = Some(ap);
            Ok(())
        }
        "from-sector" => {
            // rule of thumb: copy the killed sector's finite table with the
            // sector group letters renamed to the dressing letters
            let sec = th
                .sectors
                .get(value.trim())
                .cloned()
                .ok_or_else(|| DslError {
                    file: cx.file.into(),
                    line: cx.line,
                    msg: format!("unknown sector `{value}`"),
                })?;
            let dr = th.dressings.get(dressing).unwrap().clone();
            let table = match (&sec.group, &dr.group, &sec.additive, &dr.additive) {
                (Some(sg), Some(dg), _, _) => {
                    let mut sub = crate::expr::Subst::new();
                    sub.insert(sg.g, Expr::gen(dg.g));
                    sub.insert(sg.ginv, Expr::gen(dg.ginv));
                    sub.insert(sg.dg, Expr::gen(dg.dg));
                    sub.insert(sg.vg, Expr::gen(dg.vg));
                    sub.insert(sg.dvg, Expr::gen(dg.dvg));
                    sec.finite
                        .iter()
                        .map(|(&g, e)| (g, crate::expr::substitute(e, &sub, &th.sy)))
                        .collect()
                }
                (_, _, Some(sa), Some(da)) => {
                    let mut sub = crate::expr::Subst::new();
                    sub.insert(sa.t, Expr::gen(da.t));
                    sub.insert(sa.dt, Expr::gen(da.dt));
                    sub.insert(sa.vt, Expr::gen(da.vt));
                    sub.insert(sa.dvt, Expr::gen(da.dvt));
                    sec.finite
                        .iter()
                        .map(|(&g, e)| (g, crate::expr::substitute(e, &sub, &th.sy)))
                        .collect()
                }
                _ => return cx.err("dressing/sector parameter kinds do not match"),
            };
            th.dressings.get_mut(dressing).unwrap().table = table;
            Ok(())
        }
        "residual2-params" => {
            let (names, alg) = match value.split_once(':') {
                Some((n, a)) => (n.trim(), a.trim()),
                None => return cx.err("residual2-params needs `names : algebra`"),
            };
            let names: Vec<&str> = names.split_whitespace().collect();
            if names.len() != 2 {
                return cx.err("exactly two residual parameter names required");
            }
            let p0 = th.add_param(names[0], alg.trim(), false);
            let p1 = th.add_param(names[1], alg.trim(), false);
            th.dressings.get_mut(dressing).unwrap().residual2_params = Some([p0, p1]);
            Ok(())
        }
        _ => {
            if let Some(gen_name) = key.strip_prefix("sub-tr.") {
                let sy = th.sy.clone();
                let g = sy.lookup(gen_name).ok_or_else(|| DslError {
                    file: cx.file.into(),
                    line: cx.line,
                    msg: format!("dressing rule for unknown generator `{gen_name}`"),
                })?;
                let e = expr_pub(value, &sy, cx)?;
                th.dressings.get_mut(dressing).unwrap().table_tr.insert(g, e);
                return Ok(());
            }
            if let Some(gen_name) = key.strip_prefix("sub.") {
                let sy = th.sy.clone();
                let g = sy.lookup(gen_name).ok_or_else(|| DslError {
                    file: cx.file.into(),
                    line: cx.line,
                    msg: format!("dressing rule for unknown generator `{gen_name}`"),
                })?;
                let e = expr_pub(value, &sy, cx)?;
                th.dressings.get_mut(dressing).unwrap().table.insert(g, e);
                return Ok(());
            }
            if let Some(gen_name) = key.strip_prefix("vert-killed.") {
                let sy = th.sy.clone();
                let g = sy.lookup(gen_name).ok_or_else(|| DslError {
                    file: cx.file.into(),
                    line: cx.line,
                    msg: format!("unknown generator `{gen_name}`"),
                })?;
                let e = expr_pub(value, &sy, cx)?;
                th.dressings.get_mut(dressing).unwrap().vert_killed.insert(g, e);
                return Ok(());
            }
            if let Some(gen_name) = key.strip_prefix("residual2-vert.") {
                let sy = th.sy.clone();
                let g = sy.lookup(gen_name).ok_or_else(|| DslError {
                    file: cx.file.into(),
                    line: cx.line,
                    msg: format!("unknown generator `{gen_name}`"),
                })?;
                let e = expr_pub(value, &sy, cx)?;
                th.dressings.get_mut(dressing).unwrap().residual2_vert.insert(g, e);
                return Ok(());
            }
            if let Some(rest) = key.strip_prefix("sector-finite.") {
                // `sector-finite.SECTOR.GEN = expr`: extend another sector's
                // finite table (used when dressing letters transform under a
                // residual sector).
                let (sec, gen_name) = rest.split_once('.').ok_or_else(|| DslError {
                    file: cx.file.into(),
                    line: cx.line,
                    msg: "expected `sector-finite.SECTOR.GEN`".into(),
                })?;
                let sy = th.sy.clone();
                let g = sy.lookup(gen_name).ok_or_else(|| DslError {
                    file: cx.file.into(),
                    line: cx.line,
                    msg: format!("unknown generator `{gen_name}`"),
                })?;
                let e = expr_pub(value, &sy, cx)?;
                let s = th.sectors.get_mut(sec).ok_or_else(|| DslError {
                    file: cx.file.into(),
                    line: cx.line,
                    msg: format!("unknown sector `{sec}`"),
                })?;
                s.finite.insert(g, e);
                return Ok(());
            }
            if let Some(rest) = key.strip_prefix("sector-vert.") {
                let (sec, gen_name) = rest.split_once('.').ok_or_else(|| DslError {
                    file: cx.file.into(),
                    line: cx.line,
                    msg: "expected `sector-vert.SECTOR.GEN`".into(),
                })?;
                let sy = th.sy.clone();
                let g = sy.lookup(gen_name).ok_or_else(|| DslError {
                    file: cx.file.into(),
                    line: cx.line,
                    msg: format!("unknown generator `{gen_name}`"),
                })?;
                let e = expr_pub(value, &sy, cx)?;
                let s = th.sectors.get_mut(sec).ok_or_else(|| DslError {
                    file: cx.file.into(),
                    line: cx.line,
                    msg: format!("unknown sector `{sec}`"),
                })?;
                s.vert.insert(g, e);
                return Ok(());
            }
            cx.err(format!("unknown dressing key `{key}`"))
        }
    }
}

/// Parse a `.theory` file's text (alias of `parse_theory`).
pub fn theory_from_file_text(src: &str, file: &str) -> Result<Theory, DslError> {
    parse_theory(src, file)
}
