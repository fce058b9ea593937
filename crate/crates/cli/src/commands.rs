//! The command table and the evaluator behind `show` statements.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use limclose_core::detmaps::{
    detmap_injective, detmap_well_defined, express_in_terms, theorem_c_check, DetMapError, DetMapProblem,
};
use limclose_core::groebner::{ideal_equal, ideal_member, normal_form, GroebnerError};
use limclose_core::ideal::{Ideal, IdealError, RingMapPresentation};
use limclose_core::limclose::{
    colon_step, limit_closure, limit_closure_mixed, monomial_property, LimitError, MixedClosureSpec,
};
use limclose_core::local::{LocalError, LocalOptions, LocalRingContext, Sequence};
use limclose_core::poly::{catalan, catalan_truncated_generating_poly, mod_monomial_power, PolyError};
use limclose_core::structure::{
    ann_top_cohomology, cyclic_cover_closure_check, dimension_filtration, hilbert_samuel, ij_functions,
    is_good_sop, sop_multiplicity, topology_scan, unmixed_component, ScanVerdict, StructureError,
    StructureOptions, UnmixedMode,
};
use limclose_core::{MonomialOrder, PolyRing, Polynomial, RingRef};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::render::{Cell, CommandResult, ResultKind, Table};
use crate::session::{Arg, Command, Field, Pos, Session};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgKind {
    Ring,
    Seq,
    Ideal,
    Map,
    Int,
    Poly,
    /// An ideal name or a single polynomial.
    IdealOrPoly,
    Var,
}

impl ArgKind {
    pub fn noun(self) -> &'static str {
        match self {
            ArgKind::Ring => "a ring",
            ArgKind::Seq => "a sequence",
            ArgKind::Ideal => "an ideal",
            ArgKind::Map => "a map",
            ArgKind::Int => "an integer",
            ArgKind::Poly => "a polynomial",
            ArgKind::IdealOrPoly => "an ideal or a polynomial",
            ArgKind::Var => "a variable",
        }
    }
}

pub struct CommandSpec {
    pub name: &'static str,
    pub args: &'static [ArgKind],
    /// Leading arguments that must be present.
    pub required: usize,
    /// Kind of any further arguments.
    pub variadic: Option<ArgKind>,
    /// Library operations the command exercises.
    pub ops: &'static [&'static str],
    pub summary: &'static str,
}

impl CommandSpec {
    pub fn kind_at(&self, i: usize) -> Option<ArgKind> {
        self.args.get(i).copied().or(self.variadic)
    }

    pub fn arity_text(&self) -> String {
        match (self.variadic, self.required == self.args.len()) {
            (Some(_), _) => format!("at least {} arguments", self.required),
            (None, true) => format!("{} arguments", self.required),
            (None, false) => format!("{} to {} arguments", self.required, self.args.len()),
        }
    }
}

use ArgKind::*;

macro_rules! cmd {
    ($name:literal, [$($a:ident),*], $req:literal, $var:expr, [$($op:literal),*], $sum:literal) => {
        CommandSpec { name: $name, args: &[$($a),*], required: $req, variadic: $var, ops: &[$($op),*], summary: $sum }
    };
}

pub static COMMANDS: &[CommandSpec] = &[
    cmd!("expand", [Ring, Poly], 2, None, ["poly_add", "poly_mul"], "normal form of a polynomial expression"),
    cmd!("modpow", [Ring, Poly, Int], 3, Some(Var), ["mod_monomial_power"], "drop terms divisible by v^n for listed v (all variables if none)"),
    cmd!("catalan", [Int], 1, None, ["catalan"], "Catalan numbers C_0..C_k"),
    cmd!("catgen", [Ring, Var, Var, Int], 4, None, ["catalan_truncated_generating_poly"], "sum of C_i (uv)^i for i <= k"),
    cmd!("nf", [Ring, Poly, Ideal], 3, None, ["normal_form"], "remainder modulo I plus the relations"),
    cmd!("gb", [Ring, Ideal], 2, None, ["buchberger", "reduce_basis"], "reduced Groebner basis of I plus the relations"),
    cmd!("member", [Ring, Poly, Ideal], 3, None, ["ideal_member"], "membership in I plus the relations, before localizing"),
    cmd!("equal", [Ring, Ideal, Ideal], 3, None, ["ideal_equal"], "equality modulo the relations, before localizing"),
    cmd!("sum", [Ring, Ideal, Ideal], 3, None, ["ideal_sum"], "I + K"),
    cmd!("product", [Ring, Ideal, Ideal], 3, None, ["ideal_product"], "I K"),
    cmd!("power", [Ring, Ideal, Int], 3, None, ["ideal_power"], "I^k"),
    cmd!("intersect", [Ring, Ideal, Ideal], 3, None, ["ideal_intersect"], "I and K intersected"),
    cmd!("colon", [Ring, Ideal, IdealOrPoly], 3, None, ["ideal_colon", "ideal_colon_ideal"], "I : f or I : K"),
    cmd!("saturate", [Ring, Ideal, Poly], 3, None, ["ideal_saturate"], "I : f^infinity"),
    cmd!("eliminate", [Ring, Ideal, Var], 3, Some(Var), ["eliminate"], "I intersected with the subring without the listed variables"),
    cmd!("contract", [Map, Ideal], 2, None, ["contract"], "preimage of a target ideal"),
    cmd!("krull", [Ring, Ideal], 2, None, ["krull_dim"], "Krull dimension of the affine quotient"),
    cmd!("vdim", [Ring, Ideal], 2, None, ["vecspace_dim"], "vector space dimension of a zero-dimensional quotient"),
    cmd!("dim", [Ring, Ideal], 1, None, ["local_dim"], "local dimension of R or of R/I"),
    cmd!("length", [Ring, Ideal], 2, None, ["local_length"], "length of R/I"),
    cmd!("local-member", [Ring, Poly, Ideal], 3, None, ["local_member"], "membership after localizing"),
    cmd!("local-contains", [Ring, Ideal, Ideal], 3, None, ["local_contains"], "K contained in I after localizing"),
    cmd!("local-equal", [Ring, Ideal, Ideal], 3, None, ["local_contains"], "equality after localizing"),
    cmd!("is-sop", [Ring, Seq], 2, None, ["is_sop"], "system of parameters test"),
    cmd!("in-mpower", [Ring, Ideal, Int], 3, None, ["contained_in_m_power"], "I contained in m^k"),
    cmd!("step", [Ring, Seq, Int], 3, None, ["colon_step"], "(x^[n+1]) : (x_1...x_r)^n"),
    cmd!("limclose", [Ring, Seq, Int], 2, None, ["limit_closure"], "limit closure of s^[n] (n = 1 by default)"),
    cmd!("limclose-mixed", [Ring, Seq, Int, Seq, Int], 5, None, ["limit_closure_mixed"], "limit closure of (s^[n] | t^[m])"),
    cmd!("monomial-check", [Ring, Seq], 2, None, ["monomial_property"], "1 is not in the limit closure"),
    cmd!("unmixed", [Ring, Seq], 2, Some(Ideal), ["unmixed_component"], "unmixed component; listed components enable the cross-check"),
    cmd!("dimfilt", [Ring, Seq], 2, None, ["dimension_filtration"], "dimension filtration"),
    cmd!("goodsop", [Ring, Seq], 2, None, ["is_good_sop"], "whether s is a good system of parameters"),
    cmd!("samuel", [Ring, Ideal, Int], 3, None, ["hilbert_samuel"], "Hilbert-Samuel lengths up to k"),
    cmd!("mult", [Ring, Seq], 2, None, ["hilbert_samuel"], "multiplicity of a system of parameters"),
    cmd!("ij", [Ring, Seq, Int], 3, None, ["ij_functions"], "I and J functions for n = 1..N"),
    cmd!("anntop", [Ring, Seq], 2, None, ["ann_top_cohomology"], "annihilator of the top local cohomology"),
    cmd!("topo", [Ring, Seq, Int, Int], 4, None, ["topology_scan"], "limit-closure against m-adic topology scan"),
    cmd!("cover", [Map, Seq], 2, None, ["cyclic_cover_closure_check"], "closure contraction along a finite extension"),
    cmd!("detmap", [Ring, Seq, Seq], 3, None, ["express_in_terms", "detmap_injective"], "determinantal map from R/(x)^lim to R/(y)^lim"),
    cmd!("sopcheck", [Ring, Seq, Seq, Int, Int], 4, None, ["theoremC_check"], "y sop against determinantal injectivity"),
    cmd!("catalan-demo", [Int], 0, None, ["ideal_colon", "limit_closure", "local_length", "catalan_truncated_generating_poly"], "the worked Catalan example end to end"),
];

pub fn lookup(name: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.name == name)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderChoice {
    Grevlex,
    Lex,
}

impl OrderChoice {
    pub fn order(self) -> MonomialOrder {
        match self {
            OrderChoice::Grevlex => MonomialOrder::grevlex(),
            OrderChoice::Lex => MonomialOrder::lex(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub order: OrderChoice,
    pub local: LocalOptions,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            order: OrderChoice::Grevlex,
            local: LocalOptions::default(),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalError {
    pub pos: Pos,
    pub command: String,
    pub message: String,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.pos, self.command, self.message)
    }
}

impl std::error::Error for EvalError {}

/// Module errors flattened to a message; the location is added by the caller.
struct Failure(String);

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure(e.to_string())
            }
        }
    )*};
}
failure_from!(PolyError, GroebnerError, IdealError, LocalError, LimitError, StructureError, DetMapError);

type Outcome = Result<CommandResult, Failure>;

/// Evaluates commands against a session, caching one local ring per
/// declared ring.
pub struct Evaluator {
    config: Config,
    contexts: HashMap<String, LocalRingContext>,
}

impl Evaluator {
    pub fn new(config: Config) -> Self {
        Evaluator {
            config,
            contexts: HashMap::new(),
        }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn run_command(&mut self, session: &Session, cmd: &Command) -> Result<CommandResult, EvalError> {
        let start = Instant::now();
        let out = self.dispatch(session, cmd).map_err(|Failure(message)| EvalError {
            pos: cmd.pos,
            command: cmd.to_string(),
            message,
        })?;
        let mut out = out;
        out.command = Some(cmd.to_string());
        out.line = Some(cmd.pos.line);
        out.elapsed = Some(start.elapsed());
        Ok(out)
    }

    fn context(&mut self, session: &Session, ring: &str) -> Result<LocalRingContext, Failure> {
        if let Some(c) = self.contexts.get(ring) {
            return Ok(c.clone());
        }
        let decl = session.ring(ring).ok_or_else(|| Failure(format!("unknown ring `{ring}`")))?;
        if let Field::Prime(p) = decl.field {
            return Err(Failure(format!("coefficients in Fp({p}) are not supported; only QQ is implemented")));
        }
        let ctx = LocalRingContext::new(Ideal::new(&decl.ring, decl.relations.clone()), self.config.local)?;
        self.contexts.insert(ring.to_string(), ctx.clone());
        Ok(ctx)
    }

    fn structure_options(&self) -> StructureOptions {
        StructureOptions {
            seed: self.config.seed,
            ..StructureOptions::default()
        }
    }

    fn dispatch(&mut self, session: &Session, cmd: &Command) -> Outcome {
        let a = Args { session, args: &cmd.args };
        if cmd.name == "catalan" {
            return Ok(catalan_numbers(a.int(0)?));
        }
        if cmd.name == "catalan-demo" {
            let n = if cmd.args.is_empty() { 4 } else { a.int(0)? };
            return catalan_demo(n as u32, self.config.local);
        }
        if cmd.name == "contract" || cmd.name == "cover" {
            return self.map_command(session, cmd, &a);
        }
        let rname = a.name(0)?;
        let ctx = self.context(session, rname)?;
        let ring = ctx.ring().clone();
        let opts = self.structure_options();
        let r = match cmd.name.as_str() {
            "expand" => polynomial(&a.poly(1)?),
            "modpow" => {
                let n = u16::try_from(a.int(2)?).map_err(|_| Failure("power too large".into()))?;
                if n == 0 {
                    return Err(Failure("power must be positive".into()));
                }
                let vars: Vec<usize> = if cmd.args.len() > 3 {
                    (3..cmd.args.len()).map(|i| a.var(i)).collect::<Result<_, _>>()?
                } else {
                    (0..ring.nvars()).collect()
                };
                polynomial(&mod_monomial_power(&a.poly(1)?, &vars, n)?)
            }
            "catgen" => {
                let names = ring.names();
                let (u, v) = (&names[a.var(1)?], &names[a.var(2)?]);
                polynomial(&catalan_truncated_generating_poly(&ring, u, v, a.int(3)? as usize)?)
            }
            "nf" => {
                let i = a.quotient_ideal(&ctx, 2)?;
                polynomial(&normal_form(&a.poly(1)?, i.gb().generators()).remainder)
            }
            "gb" => ideal(&a.quotient_ideal(&ctx, 1)?),
            "member" => {
                let m = ideal_member(&a.poly(1)?, a.quotient_ideal(&ctx, 2)?.gb())?;
                let mut r = CommandResult::verdict(m.member);
                if !m.member {
                    r.fact("remainder", m.remainder.to_string());
                }
                r
            }
            "equal" => CommandResult::verdict(ideal_equal(a.quotient_ideal(&ctx, 1)?.gb(), a.quotient_ideal(&ctx, 2)?.gb())?),
            "sum" => local_ideal(&ctx, &a.quotient_ideal(&ctx, 1)?.sum(&a.quotient_ideal(&ctx, 2)?)?),
            "product" => local_ideal(&ctx, &a.quotient_ideal(&ctx, 1)?.product(&a.quotient_ideal(&ctx, 2)?)?),
            "power" => {
                let k = a.int(2)?;
                if k == 0 {
                    local_ideal(&ctx, &Ideal::unit(&ring))
                } else {
                    local_ideal(&ctx, &a.quotient_ideal(&ctx, 1)?.power(k as u32))
                }
            }
            "intersect" => local_ideal(&ctx, &a.quotient_ideal(&ctx, 1)?.intersect(&a.quotient_ideal(&ctx, 2)?)?),
            "colon" => {
                let i = a.quotient_ideal(&ctx, 1)?;
                match &cmd.args[2] {
                    Arg::Poly(f) => local_ideal(&ctx, &i.colon(f)?),
                    _ => local_ideal(&ctx, &i.colon_ideal(&a.quotient_ideal(&ctx, 2)?)?),
                }
            }
            "saturate" => {
                let (s, k) = a.quotient_ideal(&ctx, 1)?.saturate(&a.poly(2)?)?;
                let mut r = local_ideal(&ctx, &s);
                r.fact("exponent", k);
                r
            }
            "eliminate" => {
                let drop: Vec<usize> = (2..cmd.args.len()).map(|i| a.var(i)).collect::<Result<_, _>>()?;
                ideal(&a.quotient_ideal(&ctx, 1)?.eliminate(&drop))
            }
            "krull" => integer(a.quotient_ideal(&ctx, 1)?.krull_dim()? as i64),
            "vdim" => integer(a.quotient_ideal(&ctx, 1)?.vecspace_dim()? as i64),
            "dim" => {
                if cmd.args.len() > 1 {
                    integer(ctx.local_dim(&a.ideal(&ring, 1)?)? as i64)
                } else {
                    integer(ctx.dim() as i64)
                }
            }
            "length" => integer(ctx.local_length(&a.ideal(&ring, 1)?)? as i64),
            "local-member" => CommandResult::verdict(ctx.local_member(&a.poly(1)?, &a.ideal(&ring, 2)?)),
            "local-contains" => CommandResult::verdict(ctx.local_contains(&a.ideal(&ring, 1)?, &a.ideal(&ring, 2)?)),
            "local-equal" => CommandResult::verdict(ctx.local_equal(&a.ideal(&ring, 1)?, &a.ideal(&ring, 2)?)),
            "is-sop" => CommandResult::verdict(ctx.is_sop(&a.seq(1)?)),
            "in-mpower" => {
                let (i, k) = (a.ideal(&ring, 1)?, a.int(2)? as u32);
                if k == 0 {
                    return Err(Failure("the power must be positive".into()));
                }
                let mut r = CommandResult::verdict(ctx.contained_in_m_power(&i, k));
                if let Some(w) = ctx.witnesses_outside_m_power(&i, k).first() {
                    r.fact("witness", w.to_string());
                }
                r
            }
            "step" => local_ideal(&ctx, &colon_step(&ctx, &a.seq(1)?, a.int(2)? as u32)?),
            "limclose" => {
                let n = if cmd.args.len() > 2 { a.int(2)? as u32 } else { 1 };
                if n == 0 {
                    return Err(Failure("the power must be positive".into()));
                }
                let res = limit_closure(&ctx, &a.seq(1)?.power(n))?;
                let mut r = local_ideal(&ctx, &res.closure);
                r.stabilization_index = Some(res.stabilization_index);
                r.fact("proper", res.is_proper);
                r
            }
            "limclose-mixed" => {
                let spec = MixedClosureSpec {
                    head: a.seq(1)?,
                    head_power: positive(a.int(2)?)?,
                    tail: a.seq(3)?,
                    tail_power: positive(a.int(4)?)?,
                };
                local_ideal(&ctx, &limit_closure_mixed(&ctx, &spec)?)
            }
            "monomial-check" => CommandResult::verdict(monomial_property(&ctx, &a.seq(1)?)?),
            "unmixed" => {
                let comps: Vec<Ideal> = (2..cmd.args.len()).map(|i| a.ideal(&ring, i)).collect::<Result<_, _>>()?;
                let mode = if comps.is_empty() {
                    UnmixedMode::TheoremA
                } else {
                    UnmixedMode::Both(comps)
                };
                let res = unmixed_component(&ctx, &a.seq(1)?, &mode, &opts)?;
                let mut r = local_ideal(&ctx, &res.component);
                r.fact("intersection_depth", res.intersection_depth);
                if let Some(c) = res.cross_check {
                    r.verdict = Some(c);
                    r.fact("assisted_agrees", c);
                }
                r
            }
            "dimfilt" => {
                let f = dimension_filtration(&ctx, &a.seq(1)?, &opts)?;
                let mut t = Table::new(&["level", "dim", "generators"]);
                for (i, (level, d)) in f.chain.iter().zip(&f.dims).enumerate() {
                    let gens = local_ideal(&ctx, level).generators;
                    t.push(vec![i.into(), (*d).into(), format_list(&gens).into()]);
                }
                let mut r = CommandResult::new(ResultKind::Report);
                r.verdict = Some(f.goodness_verified);
                r.fact("sequence", f.sequence.to_string());
                r.fact("attempts", f.attempts);
                r.table("filtration", t);
                r
            }
            "goodsop" => {
                let x = a.seq(1)?;
                let f = dimension_filtration(&ctx, &x, &StructureOptions { retries: 0, ..opts })?;
                CommandResult::verdict(is_good_sop(&ctx, &x, &f))
            }
            "samuel" => {
                let k = a.int(2)? as u32;
                if k == 0 {
                    return Err(Failure("k must be positive".into()));
                }
                let hs = hilbert_samuel(&ctx, &a.ideal(&ring, 1)?, k)?;
                let mut t = Table::new(&["k", "length"]);
                for (i, v) in hs.values.iter().enumerate() {
                    t.push(vec![(i + 1).into(), (*v).into()]);
                }
                let mut d = Table::new(&["k", "difference"]);
                for (k, v) in hs.differences() {
                    d.push(vec![k.into(), v.into()]);
                }
                let mut r = CommandResult::new(ResultKind::Table);
                r.fact("degree", hs.degree);
                if let Some(e) = hs.multiplicity {
                    r.fact("multiplicity", e);
                }
                r.table("lengths", t).table("differences", d);
                r
            }
            "mult" => integer(sop_multiplicity(&ctx, &a.seq(1)?)? as i64),
            "ij" => {
                let table = ij_functions(&ctx, &a.seq(1)?, a.int(2)? as u32)?;
                let d = ctx.dim();
                let mut t = Table::new(&["n", "length", &format!("e*n^{d}"), "closure-length", "I", "J"]);
                for row in &table.rows {
                    t.push(vec![
                        row.n.into(),
                        row.length.into(),
                        row.multiplicity.into(),
                        row.closure_length.into(),
                        row.i.into(),
                        row.j.into(),
                    ]);
                }
                let mut r = CommandResult::new(ResultKind::Table);
                r.fact("multiplicity", table.multiplicity);
                r.fact("nonnegative", table.is_nonnegative());
                r.fact("nondecreasing", table.is_nondecreasing());
                r.table("ij", t);
                r
            }
            "anntop" => local_ideal(&ctx, &ann_top_cohomology(&ctx, &a.seq(1)?, &opts)?),
            "topo" => {
                let scan = topology_scan(&ctx, &a.seq(1)?, a.int(2)? as u32, a.int(3)? as u32)?;
                let mut t = Table::new(&["k", "v", "witness"]);
                for row in &scan.rows {
                    let v = row.v.map_or(Cell::Text("-".into()), |v| v.into());
                    let w = row.witness.as_ref().map_or("-".to_string(), |w| w.to_string());
                    t.push(vec![row.k.into(), v, w.into()]);
                }
                let mut r = CommandResult::new(ResultKind::Report);
                match &scan.verdict {
                    ScanVerdict::EquivalenceEvidence { n0 } => {
                        r.verdict = Some(true);
                        r.fact("checked_up_to", *n0);
                    }
                    ScanVerdict::FailureAt { k, witness } => {
                        r.verdict = Some(false);
                        r.fact("failure_k", *k);
                        r.fact("witness", witness.to_string());
                    }
                }
                r.fact("v_max", scan.v_max);
                r.table("scan", t);
                r.warnings = scan.warnings.clone();
                r
            }
            "detmap" => {
                let (x, y) = (a.seq(1)?, a.seq(2)?);
                let p = express_in_terms(&ctx, &y, &x)?;
                let injective = detmap_injective(&ctx, &p)?;
                let mut r = detmap_report(&p);
                r.verdict = Some(injective);
                r.fact("well_defined", detmap_well_defined(&ctx, &p)?);
                let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
                let mut same = true;
                for _ in 0..5 {
                    let q = p.perturbed(&ctx, &mut rng);
                    same &= detmap_injective(&ctx, &q)? == injective;
                }
                r.fact("matrix_independent", same);
                r
            }
            "sopcheck" => {
                let equi = cmd.args.len() > 4 && a.int(4)? != 0;
                let rep = theorem_c_check(&ctx, &a.seq(1)?, &a.seq(2)?, a.int(3)? as u32, equi)?;
                let mut r = detmap_report(&rep.problem);
                r.verdict = Some(rep.agree);
                r.fact("y_is_sop", rep.y_is_sop);
                r.fact("injective", rep.injective);
                r.fact("ell", rep.ell);
                r.fact("x_in_m_ell", rep.x_in_m_ell);
                r.warnings = rep.caveats.clone();
                r
            }
            other => return Err(Failure(format!("command `{other}` has no evaluator"))),
        };
        Ok(r)
    }

    fn map_command(&mut self, session: &Session, cmd: &Command, a: &Args) -> Outcome {
        let decl = session.map(a.name(0)?).ok_or_else(|| Failure("unknown map".into()))?;
        let src = self.context(session, &decl.source)?;
        let tgt = self.context(session, &decl.target)?;
        let map = RingMapPresentation::new(src.defining_ideal().clone(), tgt.defining_ideal().clone(), decl.images.clone())?;
        match cmd.name.as_str() {
            "contract" => {
                let i = a.ideal(tgt.ring(), 1)?;
                Ok(ideal(&map.contract(&tgt.with_relations(&i))?))
            }
            _ => {
                let x = a.seq_in(src.ring(), 1)?;
                let rep = cyclic_cover_closure_check(&map, &x, self.config.local, &self.structure_options())?;
                let mut r = CommandResult::new(ResultKind::Report);
                r.verdict = Some(rep.contraction_equal);
                r.generators = local_ideal(&src, &rep.closure_source).generators;
                r.fact("contraction_equal", rep.contraction_equal);
                r.fact("length_ideal", rep.length_ideal);
                r.fact("length_closure", rep.length_closure);
                r.fact("length_closure_quotient", rep.length_ideal - rep.length_closure);
                r.fact("length_target", rep.length_target);
                if let Some(e) = rep.multiplicity {
                    r.fact("multiplicity", e);
                }
                if let Some(id) = &rep.identities {
                    r.fact("cohomology_length", id.cohomology_length);
                    r.fact("length_identity", id.length_identity);
                    r.fact("koszul_identity", id.koszul_identity);
                }
                r.warnings = rep.warnings.clone();
                Ok(r)
            }
        }
    }
}

struct Args<'a> {
    session: &'a Session,
    args: &'a [Arg],
}

impl Args<'_> {
    fn name(&self, i: usize) -> Result<&str, Failure> {
        match &self.args[i] {
            Arg::Name(n) => Ok(n),
            _ => Err(Failure(format!("argument {} must be a name", i + 1))),
        }
    }

    fn int(&self, i: usize) -> Result<u64, Failure> {
        match &self.args[i] {
            Arg::Int(v) => Ok(*v),
            _ => Err(Failure(format!("argument {} must be an integer", i + 1))),
        }
    }

    fn poly(&self, i: usize) -> Result<Polynomial, Failure> {
        match &self.args[i] {
            Arg::Poly(p) => Ok(p.clone()),
            _ => Err(Failure(format!("argument {} must be a polynomial", i + 1))),
        }
    }

    fn var(&self, i: usize) -> Result<usize, Failure> {
        let p = self.poly(i)?;
        let m = p.lm();
        (0..m.nvars())
            .find(|&v| m.exponent(v) == 1)
            .ok_or_else(|| Failure(format!("argument {} must be a variable", i + 1)))
    }

    /// Ideal argument: a bound ideal or a single polynomial.
    fn ideal(&self, ring: &RingRef, i: usize) -> Result<Ideal, Failure> {
        match &self.args[i] {
            Arg::Name(n) => {
                let d = self.session.ideal(n).ok_or_else(|| Failure(format!("`{n}` is not an ideal")))?;
                Ok(Ideal::new(ring, d.generators.clone()))
            }
            Arg::Poly(p) => Ok(Ideal::new(ring, vec![p.clone()])),
            Arg::Ideal(gens) => Ok(Ideal::new(ring, gens.clone())),
            Arg::Int(_) => Err(Failure(format!("argument {} must be an ideal", i + 1))),
        }
    }

    /// The ideal argument with the ring's defining relations adjoined.
    fn quotient_ideal(&self, ctx: &LocalRingContext, i: usize) -> Result<Ideal, Failure> {
        Ok(ctx.with_relations(&self.ideal(ctx.ring(), i)?))
    }

    fn seq(&self, i: usize) -> Result<Sequence, Failure> {
        let n = self.name(i)?;
        let d = self.session.seq(n).ok_or_else(|| Failure(format!("`{n}` is not a sequence")))?;
        Ok(Sequence::new(d.entries.clone()))
    }

    fn seq_in(&self, ring: &RingRef, i: usize) -> Result<Sequence, Failure> {
        let s = self.seq(i)?;
        Ok(Sequence::new(s.entries().iter().map(|p| p.to_ring(ring)).collect()))
    }
}

fn positive(v: u64) -> Result<u32, Failure> {
    if v == 0 {
        Err(Failure("powers must be positive".into()))
    } else {
        u32::try_from(v).map_err(|_| Failure("power too large".into()))
    }
}

fn ideal(i: &Ideal) -> CommandResult {
    let mut r = CommandResult::new(ResultKind::Ideal);
    r.generators = i.reduced_generators().iter().map(|g| g.to_string()).collect();
    r
}

/// An ideal of the local ring: reduced generators, minus those that already
/// lie in the defining ideal.
fn local_ideal(ctx: &LocalRingContext, i: &Ideal) -> CommandResult {
    let j = ctx.defining_ideal();
    let mut r = CommandResult::new(ResultKind::Ideal);
    r.generators = i
        .reduced_generators()
        .iter()
        .filter(|g| !j.contains(g))
        .map(|g| g.to_string())
        .collect();
    r
}

fn polynomial(p: &Polynomial) -> CommandResult {
    let mut r = CommandResult::new(ResultKind::Polynomial);
    r.value = Some(Cell::Text(p.to_string()));
    r
}

fn integer(v: i64) -> CommandResult {
    let mut r = CommandResult::new(ResultKind::Integer);
    r.value = Some(Cell::Int(v));
    r
}

fn format_list(gens: &[String]) -> String {
    if gens.is_empty() {
        "(0)".into()
    } else {
        format!("({})", gens.join(", "))
    }
}

fn detmap_report(p: &DetMapProblem) -> CommandResult {
    let t_len = p.matrix.len();
    let cols: Vec<String> = (1..=t_len).map(|j| format!("x{j}")).collect();
    let mut cols_ref: Vec<&str> = vec!["row"];
    cols_ref.extend(cols.iter().map(String::as_str));
    let mut t = Table::new(&cols_ref);
    for (i, row) in p.matrix.iter().enumerate() {
        let mut cells: Vec<Cell> = vec![(i + 1).into()];
        cells.extend(row.iter().map(|e| Cell::Text(e.to_string())));
        t.push(cells);
    }
    let mut r = CommandResult::new(ResultKind::Report);
    r.fact("det", p.det.to_string());
    r.table("matrix", t);
    r
}

fn catalan_numbers(k: u64) -> CommandResult {
    let c = catalan(k as usize);
    let mut t = Table::new(&["i", "C_i"]);
    for (i, v) in c.coefficients().iter().enumerate() {
        t.push(vec![i.into(), Cell::Text(v.to_string())]);
    }
    let mut r = CommandResult::new(ResultKind::Table);
    r.table("catalan", t);
    r
}

/// `x - y v Σ_{i=0}^{n-2} C_i (uv)^i` in the ring with variables `x, y, u, v`.
pub fn catalan_closure_generator(ring: &RingRef, n: u32) -> Polynomial {
    let var = |s: &str| Polynomial::var_named(ring, s).expect("ring has x, y, u, v");
    let x = var("x");
    if n < 2 {
        return x;
    }
    let c = catalan_truncated_generating_poly(ring, "u", "v", n as usize - 2).expect("ring has u, v");
    &x - &(&(&var("y") * &var("v")) * &c)
}

/// Colon table, closure closed form and generating-function identity for
/// `Q[x,y,u,v]/(xy - ux^2 - vy^2)`.
fn catalan_demo(n_max: u32, options: LocalOptions) -> Outcome {
    let ring = PolyRing::new(&["x", "y", "u", "v"], MonomialOrder::grevlex());
    let var = |s: &str| Polynomial::var_named(&ring, s).expect("declared");
    let (x, y, u, v) = (var("x"), var("y"), var("u"), var("v"));
    let f = &(&(&x * &y) - &(&u * &x.pow(2))) - &(&v * &y.pow(2));
    let ctx = LocalRingContext::new(Ideal::new(&ring, vec![f.clone()]), options)?;
    let s = Sequence::new(vec![y.clone(), u.clone(), v.clone()]);

    let mut table = Table::new(&["n", "a_n", "colon", "closure", "s", "length", "n^3"]);
    let mut all = true;
    for n in 1..=n_max {
        let a_n = catalan_closure_generator(&ring, n);
        let expected = Ideal::new(&ring, vec![y.pow(n), u.pow(n), v.pow(n), a_n.clone()]);
        let base = ctx.with_relations(&Ideal::new(&ring, vec![y.pow(2 * n), u.pow(2 * n), v.pow(2 * n)]));
        let colon = base.colon(&s.product(&ring).pow(n))?;
        let colon_ok = ctx.local_equal(&colon, &expected);
        let closure = limit_closure(&ctx, &s.power(n))?;
        let closure_ok = ctx.local_equal(&closure.closure, &expected);
        let length = ctx.local_length(&closure.closure)?;
        let cube = (n as u64).pow(3);
        all &= colon_ok && closure_ok && length == cube;
        table.push(vec![
            n.into(),
            a_n.to_string().into(),
            colon_ok.into(),
            closure_ok.into(),
            closure.stabilization_index.into(),
            length.into(),
            cube.into(),
        ]);
    }

    let mut ids = Table::new(&["n", "identity"]);
    for n in 2..=12u32 {
        // Left factors use C_0..C_{n-2}; the right side needs C(uv) through
        // degree n-1 in uv, the last term that survives modulo (u^n, v^n).
        let c = catalan_truncated_generating_poly(&ring, "u", "v", n as usize - 2)?;
        let full = catalan_truncated_generating_poly(&ring, "u", "v", n as usize - 1)?;
        let left = &(&x - &(&(&y * &v) * &c)) * &(&y - &(&(&x * &u) * &c));
        let right = &f * &full;
        let uv = [2usize, 3usize];
        let ok = mod_monomial_power(&left, &uv, n as u16)? == mod_monomial_power(&right, &uv, n as u16)?;
        all &= ok;
        ids.push(vec![n.into(), ok.into()]);
    }

    let mut r = CommandResult::new(ResultKind::Report);
    r.verdict = Some(all);
    r.table("closures", table).table("generating_function", ids);
    Ok(r)
}
