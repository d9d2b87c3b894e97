//! The `Theory` value: generators, rule tables, Lagrangian, gauge sectors,
//! dressing declarations and golden expectations.  Immutable after load.

use crate::expr::{Bidegree, Derived, Expr, GenId, GenKind, GroupLetters, Symbols};
use crate::scalar::Coeff;
use std::collections::BTreeMap;

/// A gauge sector: parameters, finite and infinitesimal action tables.
#[derive(Debug, Clone)]
pub struct Sector {
    pub name: String,
    /// Two fresh infinitesimal parameters (chi/eta, tau/tau2, ...), plus
    /// their exterior-derivative letters.
    pub params: [GenId; 2],
    /// Optional third parameter (cyclic 2-cocycle identity).
    pub param3: Option<GenId>,
    /// Group letters for finite transformations, if the sector has a finite
    /// form (translations use an additive parameter instead).
    pub group: Option<GroupLetters>,
    /// Additive finite parameter (translation sectors): the letter `t` with
    /// its d- and variational letters.
    pub additive: Option<AdditiveParam>,
    /// Second group element / additive parameter for cocycle composition
    /// checks.
    pub group2: Option<GroupLetters>,
    pub additive2: Option<AdditiveParam>,
    /// Finite gauge transformation of each generator (written with the
    /// sector's group/additive letters; field-dependent terms use the
    /// variational letters of the group element).  For bullet ("stripped")
    /// sectors this table applies inside bullet slots.
    pub finite: BTreeMap<GenId, Expr>,
    /// Full-sandwich rules applied inside trace words and open words when a
    /// sector mixes bullet and trace pairings; falls back to `finite`.
    pub finite_tr: BTreeMap<GenId, Expr>,
    /// Contraction table of the vertical field for params[0]: variational
    /// basis letter -> (p,0) expression in params[0].
    pub vert: BTreeMap<GenId, Expr>,
    /// Parameter insertion: which variational basis letters correspond to
    /// this sector's direction (evaluate E(chi;A), theta(chi;A)): letters
    /// mapped to the parameter; all other variational letters go to zero.
    pub insertion: Vec<GenId>,
    /// Bracket closure: bracket of two parameters of this sector lands in
    /// sector `.0` with scalar prefactor `.1`.
    pub self_bracket: Option<(String, Coeff)>,
    /// Mixed bracket: [param of OTHER sector, param of this sector] lands in
    /// sector `.0` with prefactor `.1`.
    pub cross: std::collections::BTreeMap<String, (String, Coeff)>,
    /// Bullet-sector tables written with the group conjugation stripped
    /// (invariant-pairing cancellation).  Disables automatic d/δ closure of
    /// the finite table and adjusts the linearization check.
    pub stripped: bool,
    /// Declared cocycle c(A; gamma) for c-equivariant sectors (finite form).
    pub cocycle: Option<Expr>,
    /// Abelian sector: parameter bracket vanishes identically.
    pub abelian: bool,
    /// Declared expectation: the cocycle is a trivial group morphism.
    pub expect_trivial: bool,
}

/// Additive finite parameter letters (gauge translations): t, dt, δt, dδt.
#[derive(Debug, Clone, Copy)]
pub struct AdditiveParam {
    pub t: GenId,
    pub dt: GenId,
    pub vt: GenId,
    pub dvt: GenId,
}

/// A dressing field declaration.
#[derive(Debug, Clone)]
pub struct Dressing {
    pub name: String,
    /// Sector killed by this dressing.
    pub kills: String,
    /// Table written conjugation-stripped (bullet theories).
    pub stripped: bool,
    /// Group letters (u, u⁻¹, du, δu, dδu) for group-valued dressings.
    pub group: Option<GroupLetters>,
    /// Additive dressing letters (translations): v, dv, δv, dδv.
    pub additive: Option<AdditiveParam>,
    /// Substitution table implementing the rule of thumb gamma -> u.
    pub table: BTreeMap<GenId, Expr>,
    /// Full-sandwich rules for trace words (mixed-pairing theories).
    pub table_tr: BTreeMap<GenId, Expr>,
    /// Contraction of the killed sector's vertical field on the dressing's
    /// variational letter (e.g. δu -> -chi u,  δv -> -tau).
    pub vert_killed: BTreeMap<GenId, Expr>,
    /// Second-kind residual parameters (alpha, alpha2) and the contraction
    /// of alpha^v on the dressing variational letter (δu -> u alpha).
    pub residual2_params: Option<[GenId; 2]>,
    pub residual2_vert: BTreeMap<GenId, Expr>,
    /// First-kind residual sector name, when declared.
    pub residual1: Option<String>,
}

/// Golden expectations: named canonical expressions (compared by `equals`).
pub type Golden = BTreeMap<String, String>;

/// How the oracle obtains each generator (see oracle module).
#[derive(Debug, Clone, PartialEq)]
pub enum OracleRule {
    /// Random matrix-valued form of the letter's kind and degree.
    Assign,
    /// Random group element near the identity.
    AssignGroup,
    /// Random Grassmann-valued form (variational letters).
    AssignVar,
    /// Evaluate this expression (curvatures, composites).
    Compute(Expr),
    /// Computed by the mesh differential of another letter.
    ComputeD(GenId),
    /// Group inverse of another letter.
    ComputeInv(GenId),
    /// e ∧ e^T style composite built from a frame letter: outer(frame).
    /// The i32 scales the result.
    Special(SpecialOracle),
}

/// Built-in oracle constructions that are not word-expressible.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecialOracle {
    /// antisym(e ∧ e^T) built from the vector-valued 1-form `e4`.
    EeT,
    /// antisym(δe ∧ e^T) (one Grassmann direction on δe).
    DeeT,
    /// antisym(D^A e ∧ e^T).
    TeeT,
    /// 𝒅 of TeeT.
    DTeeT,
    /// Riemann curvature of the linear-connection letter (R = dΓ + Γ²).
    CurvOf(GenId),
    /// Covariant derivative with the adjoint action: d(field) + [conn, field].
    CovDAdj(GenId, GenId),
}

#[derive(Debug, Clone)]
pub struct Theory {
    pub id: String,
    pub dim: i32,
    pub sy: Symbols,
    pub d_rules: BTreeMap<GenId, Expr>,
    pub vd_rules: BTreeMap<GenId, Expr>,
    pub lagrangian: Expr,
    /// Variational basis letters (δA, δe, deeT, ...): the letters that must
    /// appear underived in the bulk of an Euler-Lagrange split.
    pub var_basis: Vec<GenId>,
    pub sectors: BTreeMap<String, Sector>,
    /// Order in which sectors were declared (reports, checks).
    pub sector_order: Vec<String>,
    pub dressings: BTreeMap<String, Dressing>,
    pub dressing_order: Vec<String>,
    /// On-shell rewrite |S: substitutions applied by the on-shell mode.
    pub on_shell: BTreeMap<GenId, Expr>,
    /// Normal/torsion-free rewrite |N.
    pub normal: BTreeMap<GenId, Expr>,
    /// Declared identities killed by |N (canonical bodies dropped), e.g.
    /// Tr(deeTh R) for the Holst term via Bianchi + normality.
    pub normal_kills: Vec<Expr>,
    /// Slot-letter map to the dressed/metric alphabet (per-letter), applied
    /// with one factor of the declared scalar per bullet pairing.
    pub metric_map: BTreeMap<GenId, GenId>,
    /// Scalar constant multiplying each bullet under the metric map
    /// (sqrt|det g|), if declared.
    pub metric_scale: Option<u32>,
    pub golden: Golden,
    pub oracle: BTreeMap<GenId, OracleRule>,
    /// Matrix dimension used by the oracle for this theory's Lie sector.
    pub oracle_matrix_dim: usize,
}

impl Theory {
    pub fn new(id: &str, dim: i32) -> Theory {
        Theory {
            id: id.to_string(),
            dim,
            sy: Symbols::new(dim),
            d_rules: BTreeMap::new(),
            vd_rules: BTreeMap::new(),
            lagrangian: Expr::zero(),
            var_basis: Vec::new(),
            sectors: BTreeMap::new(),
            sector_order: Vec::new(),
            dressings: BTreeMap::new(),
            dressing_order: Vec::new(),
            on_shell: BTreeMap::new(),
            normal: BTreeMap::new(),
            normal_kills: Vec::new(),
            metric_map: BTreeMap::new(),
            metric_scale: None,
            golden: BTreeMap::new(),
            oracle: BTreeMap::new(),
            oracle_matrix_dim: 2,
        }
    }

    /// Declare a base generator; no rules attached yet.
    pub fn add_gen(&mut self, name: &str, p: i32, q: i32, kind: GenKind) -> GenId {
        self.sy.add_gen(name, Bidegree::new(p, q), kind, Derived::Base)
    }

    /// Declare the variational-basis letters δX, dδX of base X with the
    /// standard closure rules (d δX = dδX, d dδX = 0, δ-of-δ = 0).
    pub fn add_var_letters(&mut self, base: GenId) -> (GenId, GenId) {
        let (v, dv) = self.sy.add_var_basis(base);
        self.vd_rules.insert(base, Expr::gen(v));
        self.d_rules.insert(v, Expr::gen(dv));
        self.d_rules.insert(dv, Expr::zero());
        self.vd_rules.insert(v, Expr::zero());
        self.vd_rules.insert(dv, Expr::zero());
        self.var_basis.push(v);
        (v, dv)
    }

    /// Declare a group element with its derivative letters and the group
    /// calculus rules (d g = dg, d g⁻¹ = -g⁻¹ dg g⁻¹, ...).
    pub fn add_group(&mut self, name: &str, group: &str) -> GroupLetters {
        let gl = self.sy.add_group(name, group);
        let sy = &self.sy;
        let ginv = Expr::gen(gl.ginv);
        let dg = Expr::gen(gl.dg);
        let vg = Expr::gen(gl.vg);
        let dvg = Expr::gen(gl.dvg);
        let m = |a: &Expr, b: &Expr| a.mul(b, sy).unwrap();
        self.d_rules.insert(gl.g, dg.clone());
        self.d_rules.insert(gl.ginv, m(&m(&ginv, &dg), &ginv).neg());
        self.d_rules.insert(gl.dg, Expr::zero());
        self.d_rules.insert(gl.vg, dvg.clone());
        self.d_rules.insert(gl.dvg, Expr::zero());
        self.vd_rules.insert(gl.g, vg.clone());
        self.vd_rules.insert(gl.ginv, m(&m(&ginv, &vg), &ginv).neg());
        self.vd_rules.insert(gl.dg, dvg);
        self.vd_rules.insert(gl.vg, Expr::zero());
        self.vd_rules.insert(gl.dvg, Expr::zero());
        self.oracle.insert(gl.g, OracleRule::AssignGroup);
        self.oracle.insert(gl.ginv, OracleRule::ComputeInv(gl.g));
        self.oracle.insert(gl.dg, OracleRule::ComputeD(gl.g));
        self.oracle.insert(gl.vg, OracleRule::AssignVar);
        self.oracle.insert(gl.dvg, OracleRule::ComputeD(gl.vg));
        gl
    }

    /// Declare an infinitesimal parameter (chi, eta, tau, alpha, ...): a
    /// (0,0) letter in the given algebra with its d-letter; field
    /// independent (δ = 0).
    pub fn add_param(&mut self, name: &str, algebra: &str, commuting: bool) -> GenId {
        let kind = GenKind::Lie { algebra: algebra.to_string(), commuting };
        let p = self.sy.add_gen(name, Bidegree::new(0, 0), kind.clone(), Derived::Base);
        let dp = self.sy.add_gen(
            &format!("d{name}"),
            Bidegree::new(1, 0),
            kind,
            Derived::D(p),
        );
        self.d_rules.insert(p, Expr::gen(dp));
        self.d_rules.insert(dp, Expr::zero());
        self.vd_rules.insert(p, Expr::zero());
        self.vd_rules.insert(dp, Expr::zero());
        self.oracle.insert(p, OracleRule::Assign);
        self.oracle.insert(dp, OracleRule::ComputeD(p));
        p
    }

    /// Declare an additive finite parameter t (or additive dressing v):
    /// letters t, dt, δt, dδt; the variational letters allow field-dependent
    /// transformations.
    pub fn add_additive(&mut self, name: &str, algebra: &str, commuting: bool) -> AdditiveParam {
        let kind = GenKind::Lie { algebra: algebra.to_string(), commuting };
        let t = self.sy.add_gen(name, Bidegree::new(0, 0), kind.clone(), Derived::Base);
        let dt =
            self.sy.add_gen(&format!("d{name}"), Bidegree::new(1, 0), kind.clone(), Derived::D(t));
        let vt =
            self.sy.add_gen(&format!("δ{name}"), Bidegree::new(0, 1), kind.clone(), Derived::Var(t));
        let dvt =
            self.sy.add_gen(&format!("dδ{name}"), Bidegree::new(1, 1), kind, Derived::D(vt));
        self.d_rules.insert(t, Expr::gen(dt));
        self.d_rules.insert(dt, Expr::zero());
        self.d_rules.insert(vt, Expr::gen(dvt));
        self.d_rules.insert(dvt, Expr::zero());
        self.vd_rules.insert(t, Expr::gen(vt));
        self.vd_rules.insert(dt, Expr::gen(dvt));
        self.vd_rules.insert(vt, Expr::zero());
        self.vd_rules.insert(dvt, Expr::zero());
        self.oracle.insert(t, OracleRule::Assign);
        self.oracle.insert(dt, OracleRule::ComputeD(t));
        self.oracle.insert(vt, OracleRule::AssignVar);
        self.oracle.insert(dvt, OracleRule::ComputeD(vt));
        AdditiveParam { t, dt, vt, dvt }
    }

    pub fn gen_named(&self, name: &str) -> GenId {
        self.sy
            .lookup(name)
            .unwrap_or_else(|| panic!("theory `{}`: unknown generator `{}`", self.id, name))
    }

    pub fn sector(&self, name: &str) -> &Sector {
        self.sectors
            .get(name)
            .unwrap_or_else(|| panic!("theory `{}`: unknown sector `{}`", self.id, name))
    }

    pub fn dressing(&self, name: &str) -> &Dressing {
        self.dressings
            .get(name)
            .unwrap_or_else(|| panic!("theory `{}`: unknown dressing `{}`", self.id, name))
    }

    /// Rule closure check: every non-scalar generator reachable from the
    /// Lagrangian, the sector tables and the dressing tables must have d-
    /// and δ-rules.
    pub fn check_closure(&self) -> Result<(), String> {
        let mut reachable: Vec<GenId> = Vec::new();
        let push_expr = |e: &Expr, out: &mut Vec<GenId>| {
            fn walk(w: &[crate::expr::Letter], out: &mut Vec<GenId>) {
                for l in w {
                    match l {
                        crate::expr::Letter::Gen(g) => out.push(*g),
                        crate::expr::Letter::Star(c) | crate::expr::Letter::DStar(c) => {
                            walk(c, out)
                        }
                    }
                }
            }
            for t in &e.terms {
                match &t.body {
                    crate::expr::Body::One => {}
                    crate::expr::Body::Word(w) | crate::expr::Body::Tr(w) => walk(w, out),
                    crate::expr::Body::Bullet(u, v) => {
                        walk(u, out);
                        walk(v, out);
                    }
                }
            }
        };
        push_expr(&self.lagrangian, &mut reachable);
        for s in self.sectors.values() {
            for e in s.finite.values() {
                push_expr(e, &mut reachable);
            }
            for e in s.vert.values() {
                push_expr(e, &mut reachable);
            }
        }
        // close under the rules themselves
        let mut seen: Vec<bool> = vec![false; self.sy.gens.len()];
        let mut stack = reachable;
        while let Some(g) = stack.pop() {
            if seen[g as usize] {
                continue;
            }
            seen[g as usize] = true;
            for table in [&self.d_rules, &self.vd_rules] {
                if let Some(rule) = table.get(&g) {
                    push_expr(rule, &mut stack);
                }
            }
        }
        for (i, hit) in seen.iter().enumerate() {
            if !hit {
                continue;
            }
            let g = i as GenId;
            if !self.d_rules.contains_key(&g) {
                return Err(format!(
                    "theory `{}`: generator `{}` has no d-rule",
                    self.id,
                    self.sy.name(g)
                ));
            }
            if !self.vd_rules.contains_key(&g) {
                return Err(format!(
                    "theory `{}`: generator `{}` has no δ-rule",
                    self.id,
                    self.sy.name(g)
                ));
            }
        }
        // Lagrangian bidegree must be (n, 0).
        if let Some(d) = self
            .lagrangian
            .homogeneous_deg(&self.sy)
            .map_err(|e| format!("theory `{}`: {}", self.id, e))?
        {
            if d != Bidegree::new(self.dim, 0) {
                return Err(format!(
                    "theory `{}`: Lagrangian bidegree is ({},{}), expected ({},0)",
                    self.id, d.p, d.q, self.dim
                ));
            }
        }
        Ok(())
    }
}
