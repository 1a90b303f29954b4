//! Scenario files: named objects in the textual syntax plus a command list,
//! executed in order into a [`Report`].

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value as Json};

use crate::algebroid::{
    courant_axioms_residual, dolbeault_section, dorfman, integrability_residual, pairing_q, QForm, SectionQ, StringData,
};
use crate::cech::{
    assemble_h, coboundary_act, cocycle_residual, connection_change_potential, pontryagin_rep, Cochain0, Cochain1,
    ConnectionFamily, Cover,
};
use crate::coeff::Coeff;
use crate::dgla::{
    d_hat_epsilon0, d_q, deformed_curvature_residual, dgla_axioms_residual, first_order_gauge, gauge_act, hat_epsilon,
    infinitesimal_action, mc_residual, obstruction_rep, phi_map, tangent_integrability_residual, GaugeElement,
    LElement, TangentPair,
};
use crate::error::{Error, Result};
use crate::form::Form;
use crate::fuzz::{run_fuzz, FuzzConfig};
use crate::gen::GenConfig;
use crate::lie::{chern_simons, cs_difference, sigma_rep, Block, Connection, GaugeMap, LieAlgebraSpec, LieForm};
use crate::morphisms::{
    apply_morphism, apply_morphism_qform, aut_condition_residual, iso_residual, AutElement, MorphismData,
};
use crate::mutation::Mutation;
use crate::scalar::Scalar;
use crate::text::{parse_coeff, parse_form, parse_scalar, print_form, print_scalar};
use crate::vector::VectorField10;

/// A scenario problem, reported with exit code 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

fn input_err<T>(msg: impl Into<String>) -> std::result::Result<T, InputError> {
    Err(InputError { line: None, column: None, message: msg.into() })
}

#[derive(Clone, Debug)]
pub enum Object {
    Form(Form),
    Scalar(Scalar),
    LieForm(LieForm),
    Connection(Connection),
    Gauge(GaugeMap),
    Section(SectionQ),
    Data(StringData),
    LElement(LElement),
    Morphism(MorphismData),
    Aut(AutElement),
    GaugeElement(GaugeElement),
    Tangent(TangentPair),
    Cover(Cover),
    Cochain1(Cochain1, Cover),
    Cochain0(Cochain0),
    Family(ConnectionFamily),
    FormList(Vec<Form>),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Form(_) => "form",
            Object::Scalar(_) => "scalar",
            Object::LieForm(_) => "lie-form",
            Object::Connection(_) => "connection",
            Object::Gauge(_) => "gauge",
            Object::Section(_) => "section",
            Object::Data(_) => "string-data",
            Object::LElement(_) => "l-element",
            Object::Morphism(_) => "morphism",
            Object::Aut(_) => "aut-element",
            Object::GaugeElement(_) => "gauge-element",
            Object::Tangent(_) => "tangent",
            Object::Cover(_) => "cover",
            Object::Cochain1(..) => "cochain1",
            Object::Cochain0(_) => "cochain0",
            Object::Family(_) => "family",
            Object::FormList(_) => "form-list",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Command {
    pub op: String,
    pub args: Map<String, Json>,
}

/// Ops and the argument keys that name objects (optional keys end in '?').
const OPS: &[(&str, &[&str])] = &[
    ("check-courant", &["data", "u", "v", "w"]),
    ("check-integrability", &["data"]),
    ("iso-check", &["from", "to", "g", "B", "u?", "v?"]),
    ("aut-check", &["connection", "element"]),
    ("cs", &["connection"]),
    ("cs-diff", &["connection", "a"]),
    ("sigma", &["gauge", "connection"]),
    ("cech-cocycle", &["cochain"]),
    ("cech-coboundary", &["cochain0", "cochain"]),
    ("cech-assemble-h", &["cochain", "family", "C"]),
    ("pontryagin", &["connection", "to?"]),
    ("dq", &["data", "x"]),
    ("dgla-axioms", &["data", "x", "y", "z"]),
    ("mc-check", &["data", "x"]),
    ("deform", &["data", "x"]),
    ("obstruction", &["data", "alpha"]),
    ("gauge-act", &["element", "data"]),
    ("gauge-infinitesimal", &["data", "alpha", "a", "b"]),
    ("phi-epsilon", &["data", "x", "tangent?"]),
    ("fuzz", &[]),
];

pub struct Scenario {
    pub n: usize,
    pub alg: LieAlgebraSpec,
    pub objects: BTreeMap<String, Object>,
    pub commands: Vec<Command>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub name: String,
    pub zero: bool,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandReport {
    pub index: usize,
    pub op: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<Entry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub commands: Vec<CommandReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_error: Option<String>,
}

impl Report {
    pub fn input_failure(e: &InputError) -> Report {
        Report { commands: Vec::new(), input_error: Some(e.to_string()) }
    }

    pub fn exit_code(&self) -> i32 {
        if self.input_error.is_some() || self.commands.iter().any(|c| c.status == Status::Error) {
            2
        } else if self.commands.iter().any(|c| c.status == Status::Fail) {
            1
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(e) = &self.input_error {
            s.push_str(&format!("input error: {e}\n"));
        }
        for c in &self.commands {
            let st = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Error => "ERROR",
            };
            s.push_str(&format!("[{}] {} {}", c.index + 1, c.op, st));
            if let Some(t) = c.time_ms {
                s.push_str(&format!(" ({t:.1} ms)"));
            }
            s.push('\n');
            if let Some(m) = &c.message {
                s.push_str(&format!("    {m}\n"));
            }
            for e in &c.values {
                s.push_str(&format!("    {} = {}\n", e.name, e.value));
            }
            for e in &c.residuals {
                s.push_str(&format!("    residual {} = {}\n", e.name, e.value));
            }
        }
        let count = |st: Status| self.commands.iter().filter(|c| c.status == st).count();
        s.push_str(&format!(
            "summary: {} pass, {} fail, {} error\n",
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Error)
        ));
        s
    }
}

pub fn print_lieform(m: &LieForm) -> String {
    let k = m.size();
    let rows: Vec<String> = (0..k)
        .map(|i| format!("[{}]", (0..k).map(|j| print_form(m.get(i, j))).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn print_section(s: &SectionQ) -> String {
    let v: Vec<String> = s.v.components().iter().map(print_scalar).collect();
    format!("V=({}) r={} xi={}", v.join(", "), print_lieform(&s.r), print_form(&s.xi))
}

fn print_qform(x: &QForm) -> String {
    let v: Vec<String> = x.v.iter().map(print_form).collect();
    format!("V=({}) r={} xi={}", v.join(", "), print_lieform(&x.r), print_form(&x.xi))
}

fn print_by_type(f: &Form) -> String {
    if f.is_zero() {
        return "0".into();
    }
    f.components().iter().map(|((p, q), c)| format!("({p},{q}): {}", print_form(c))).collect::<Vec<_>>().join("; ")
}

fn print_lelement(x: &LElement) -> String {
    format!("degree {} alpha={} b={{{}}}", x.degree, print_lieform(&x.alpha), print_by_type(&x.b))
}

fn entry(name: impl Into<String>, zero: bool, value: String) -> Entry {
    Entry { name: name.into(), zero, value }
}

fn form_entry(name: impl Into<String>, f: &Form) -> Entry {
    entry(name, f.is_zero(), print_form(f))
}

fn lie_entry(name: impl Into<String>, m: &LieForm) -> Entry {
    entry(name, m.is_zero(), print_lieform(m))
}

fn lel_entry(name: impl Into<String>, x: &LElement) -> Entry {
    entry(name, x.is_zero(), print_lelement(x))
}

// ---------------------------------------------------------------- parsing

struct Ctx<'a> {
    n: usize,
    k: usize,
    alg: &'a LieAlgebraSpec,
    objects: &'a BTreeMap<String, Object>,
    what: String,
}

type PResult<T> = std::result::Result<T, InputError>;

impl Ctx<'_> {
    fn err<T>(&self, msg: impl std::fmt::Display) -> PResult<T> {
        input_err(format!("{}: {msg}", self.what))
    }

    fn lift<T>(&self, r: Result<T>) -> PResult<T> {
        r.or_else(|e| self.err(e))
    }

    fn field<'j>(&self, o: &'j Map<String, Json>, key: &str) -> PResult<&'j Json> {
        match o.get(key) {
            Some(v) => Ok(v),
            None => self.err(format!("missing field '{key}'")),
        }
    }

    fn form(&self, v: &Json) -> PResult<Form> {
        match v {
            Json::String(s) => parse_form(s, self.n).or_else(|e| self.err(format!("'{s}': {e}"))),
            Json::Number(x) => parse_form(&x.to_string(), self.n).or_else(|e| self.err(e)),
            _ => self.err("expected a form string"),
        }
    }

    fn scalar(&self, v: &Json) -> PResult<Scalar> {
        match v {
            Json::String(s) => parse_scalar(s, self.n).or_else(|e| self.err(format!("'{s}': {e}"))),
            Json::Number(x) => parse_scalar(&x.to_string(), self.n).or_else(|e| self.err(e)),
            _ => self.err("expected a scalar string"),
        }
    }

    fn opt_form(&self, o: &Map<String, Json>, key: &str) -> PResult<Form> {
        o.get(key).map(|v| self.form(v)).unwrap_or(Ok(Form::zero()))
    }

    fn matrix(&self, v: &Json) -> PResult<LieForm> {
        let Json::Array(rows) = v else { return self.err("expected a row-major matrix") };
        if rows.len() != self.k {
            return self.err(format!("matrix has {} rows, algebra size is {}", rows.len(), self.k));
        }
        let mut e = Vec::new();
        for row in rows {
            let Json::Array(cols) = row else { return self.err("matrix rows must be lists") };
            if cols.len() != self.k {
                return self.err(format!("matrix row has {} entries, expected {}", cols.len(), self.k));
            }
            for c in cols {
                e.push(self.form(c)?);
            }
        }
        let m = LieForm::new(self.k, e);
        self.lift(self.alg.check(&m))?;
        Ok(m)
    }

    fn opt_matrix(&self, o: &Map<String, Json>, key: &str) -> PResult<LieForm> {
        o.get(key).map(|v| self.matrix(v)).unwrap_or(Ok(LieForm::zero(self.k)))
    }

    fn reference(&self, v: &Json, kind: &str) -> PResult<Option<Object>> {
        if let Json::String(name) = v {
            return match self.objects.get(name) {
                Some(o) if o.kind() == kind => Ok(Some(o.clone())),
                Some(o) => self.err(format!("'{name}' is a {}, expected a {kind}", o.kind())),
                None => self.err(format!("unknown object '{name}'")),
            };
        }
        Ok(None)
    }

    fn connection(&self, v: &Json) -> PResult<Connection> {
        if let Some(Object::Connection(c)) = self.reference(v, "connection")? {
            return Ok(c);
        }
        let Json::Object(o) = v else { return self.err("expected a connection block") };
        if let Some(t) = o.get("theta") {
            return self.lift(Connection::from_form(&self.matrix(t)?));
        }
        let (a, b) = (self.opt_matrix(o, "theta10")?, self.opt_matrix(o, "theta01")?);
        if !(a.is_zero() || a.has_bidegree(1, 0)) || !(b.is_zero() || b.has_bidegree(0, 1)) {
            return self.err("theta10 must be of type (1,0) and theta01 of type (0,1)");
        }
        self.lift(Connection::new(a, b))
    }

    fn gauge(&self, v: &Json) -> PResult<GaugeMap> {
        if let Some(Object::Gauge(g)) = self.reference(v, "gauge")? {
            return Ok(g);
        }
        let Json::Object(o) = v else { return self.err("expected a gauge block {g, g_inv}") };
        let g = self.matrix(self.field(o, "g")?)?;
        let gi = self.matrix(self.field(o, "g_inv")?)?;
        let holo = o.get("holomorphic").and_then(Json::as_bool).unwrap_or(false);
        self.lift(GaugeMap::new(g, gi, holo))
    }

    fn gauge_in(&self, o: &Map<String, Json>) -> PResult<GaugeMap> {
        match o.get("g") {
            Some(Json::String(_)) | Some(Json::Object(_)) => self.gauge(&o["g"]),
            Some(_) => self.gauge(&Json::Object(o.clone())),
            None => self.err("missing field 'g'"),
        }
    }

    fn aut(&self, o: &Map<String, Json>) -> PResult<AutElement> {
        self.lift(AutElement::new(self.gauge_in(o)?, self.opt_form(o, "B")?))
    }

    fn cover(&self, v: &Json) -> PResult<Cover> {
        if let Some(Object::Cover(c)) = self.reference(v, "cover")? {
            return Ok(c);
        }
        let Json::Object(o) = v else { return self.err("expected a cover block") };
        let m = self.field(o, "m")?.as_u64().ok_or_else(|| self.err::<()>("m must be a count").unwrap_err())? as usize;
        let idx = |v: &Json, len: usize| -> PResult<Vec<usize>> {
            let Json::Array(a) = v else { return self.err("simplices are lists of 1-based indices") };
            let r: Option<Vec<usize>> =
                a.iter().map(|x| x.as_u64().filter(|&i| i >= 1).map(|i| i as usize - 1)).collect();
            match r {
                Some(r) if r.len() == len => Ok(r),
                _ => self.err(format!("expected {len} 1-based indices")),
            }
        };
        let list = |key: &str| o.get(key).and_then(Json::as_array).cloned().unwrap_or_default();
        let pairs = list("pairs").iter().map(|p| idx(p, 2).map(|v| (v[0], v[1]))).collect::<PResult<Vec<_>>>()?;
        let triples =
            list("triples").iter().map(|p| idx(p, 3).map(|v| (v[0], v[1], v[2]))).collect::<PResult<Vec<_>>>()?;
        self.lift(Cover::new(m, pairs, triples))
    }

    fn object(&self, v: &Json) -> PResult<Object> {
        let Json::Object(o) = v else { return self.err("object definitions are JSON objects with a 'type'") };
        let ty = self.field(o, "type")?.as_str().unwrap_or("");
        let obj = match ty {
            "form" => Object::Form(self.form(self.field(o, "value")?)?),
            "scalar" => Object::Scalar(self.scalar(self.field(o, "value")?)?),
            "lie-form" => Object::LieForm(self.matrix(self.field(o, "value")?)?),
            "connection" => Object::Connection(self.connection(v)?),
            "gauge" => Object::Gauge(self.gauge(v)?),
            "section" => {
                let vv = match o.get("v") {
                    Some(Json::Array(a)) if a.len() == self.n => {
                        VectorField10::new(a.iter().map(|x| self.scalar(x)).collect::<PResult<_>>()?)
                    }
                    Some(_) => return self.err(format!("v must list {} scalars", self.n)),
                    None => VectorField10::zero(self.n),
                };
                Object::Section(self.lift(SectionQ::new(vv, self.opt_matrix(o, "r")?, self.opt_form(o, "xi")?))?)
            }
            "string-data" => {
                let th = match o.get("connection") {
                    Some(c) => self.connection(c)?,
                    None => self.connection(v)?,
                };
                let d = match o.get("H") {
                    Some(h) => StringData::from_h(self.n, self.alg.clone(), th, &self.form(h)?),
                    None => StringData::new(
                        self.n,
                        self.alg.clone(),
                        th,
                        self.opt_form(o, "H30")?,
                        self.opt_form(o, "H21")?,
                    ),
                };
                Object::Data(self.lift(d)?)
            }
            "l-element" => {
                let deg = self.field(o, "degree")?.as_u64().ok_or_else(|| self.err::<()>("degree").unwrap_err())?;
                let b = match o.get("b") {
                    Some(Json::Object(parts)) => {
                        let mut b = Form::zero();
                        for (key, val) in parts {
                            let f = self.form(val)?;
                            let t: Option<Vec<usize>> = serde_json::from_str(key).ok();
                            match t.as_deref() {
                                Some([p, q]) if f.is_zero() || f.has_bidegree(*p, *q) => b = b.add(&f),
                                _ => return self.err(format!("b component '{key}' does not match its form")),
                            }
                        }
                        b
                    }
                    Some(x) => self.form(x)?,
                    None => Form::zero(),
                };
                Object::LElement(self.lift(LElement::new(deg as usize, self.opt_matrix(o, "alpha")?, b))?)
            }
            "morphism" => Object::Morphism(self.lift(MorphismData::new(
                self.gauge_in(o)?,
                self.opt_matrix(o, "a")?,
                self.opt_form(o, "B")?,
            ))?),
            "aut-element" => Object::Aut(self.aut(o)?),
            "gauge-element" => Object::GaugeElement(self.lift(GaugeElement::new(
                self.gauge_in(o)?,
                self.opt_matrix(o, "a")?,
                self.opt_form(o, "B")?,
            ))?),
            "tangent" => Object::Tangent(TangentPair {
                hdot: self.opt_form(o, "Hdot")?,
                thetadot: self.opt_matrix(o, "thetadot")?,
            }),
            "cover" => Object::Cover(self.cover(v)?),
            "cochain1" => {
                let cov = self.cover(self.field(o, "cover")?)?;
                let mut entries = BTreeMap::new();
                for e in o.get("entries").and_then(Json::as_array).cloned().unwrap_or_default() {
                    let Json::Object(eo) = &e else { return self.err("cochain entries are objects") };
                    let p: Option<Vec<usize>> = serde_json::from_value(self.field(eo, "pair")?.clone()).ok();
                    let Some([i, j]) = p.as_deref() else { return self.err("pair must be [i,j]") };
                    if *i == 0 || *j == 0 {
                        return self.err("pair indices are 1-based");
                    }
                    if entries.insert((i - 1, j - 1), self.aut(eo)?).is_some() {
                        return self.err(format!("duplicate entry for pair ({i},{j})"));
                    }
                }
                Object::Cochain1(self.lift(Cochain1::new(self.k, &cov, entries))?, cov)
            }
            "cochain0" => {
                let mut elems = Vec::new();
                for e in o.get("elements").and_then(Json::as_array).cloned().unwrap_or_default() {
                    let Json::Object(eo) = &e else { return self.err("cochain0 elements are objects") };
                    elems.push(self.aut(eo)?);
                }
                Object::Cochain0(Cochain0 { elems })
            }
            "family" => {
                let list = o.get("thetas").and_then(Json::as_array).cloned().unwrap_or_default();
                Object::Family(ConnectionFamily {
                    thetas: list.iter().map(|t| self.connection(t)).collect::<PResult<_>>()?,
                })
            }
            "form-list" => {
                let list = o.get("values").and_then(Json::as_array).cloned().unwrap_or_default();
                Object::FormList(list.iter().map(|t| self.form(t)).collect::<PResult<_>>()?)
            }
            other => return self.err(format!("unknown object type '{other}'")),
        };
        Ok(obj)
    }
}

fn parse_algebra(v: Option<&Json>, k_default: usize) -> PResult<LieAlgebraSpec> {
    let Some(v) = v else { return Ok(LieAlgebraSpec::gl(k_default)) };
    let Json::Object(o) = v else { return input_err("algebra must be {k, pairing}") };
    let k =
        o.get("k").and_then(Json::as_u64).ok_or(()).or_else(|_| input_err("algebra.k must be a positive integer"))?
            as usize;
    let Some(p) = o.get("pairing") else { return Ok(LieAlgebraSpec::gl(k)) };
    let Json::Array(blocks) = p else { return input_err("algebra.pairing must be a list of blocks") };
    let mut bs = Vec::new();
    for b in blocks {
        let idx: Option<Vec<usize>> = b.get("block").and_then(|x| serde_json::from_value(x.clone()).ok());
        let Some(idx) = idx else { return input_err("pairing block needs 'block': [indices]") };
        if idx.contains(&0) {
            return input_err("pairing block indices are 1-based");
        }
        let mu = match b.get("mu") {
            Some(Json::String(s)) => parse_coeff(s).or_else(|e| input_err(format!("pairing mu: {e}")))?,
            Some(Json::Number(x)) => parse_coeff(&x.to_string()).or_else(|e| input_err(format!("pairing mu: {e}")))?,
            None => Coeff::one(),
            _ => return input_err("pairing mu must be a coefficient string"),
        };
        bs.push(Block { indices: idx.iter().map(|i| i - 1).collect(), mu });
    }
    LieAlgebraSpec::new(k, bs).or_else(|e| input_err(format!("algebra: {e}")))
}

impl Scenario {
    pub fn parse(text: &str) -> PResult<Scenario> {
        let root: Json = serde_json::from_str(text).map_err(|e| InputError {
            line: Some(e.line()),
            column: Some(e.column()),
            message: format!("invalid JSON: {e}"),
        })?;
        let Json::Object(root) = root else { return input_err("scenario must be a JSON object") };
        let n = match root.get("n").and_then(Json::as_u64) {
            Some(n) if (1..=6).contains(&n) => n as usize,
            _ => return input_err("scenario needs chart dimension n in 1..=6"),
        };
        let alg = parse_algebra(root.get("algebra"), 2)?;
        let mut objects = BTreeMap::new();
        if let Some(objs) = root.get("objects") {
            let Json::Object(objs) = objs else { return input_err("'objects' must map names to definitions") };
            for (name, def) in objs {
                let ctx = Ctx { n, k: alg.size(), alg: &alg, objects: &objects, what: format!("object '{name}'") };
                let o = ctx.object(def)?;
                objects.insert(name.clone(), o);
            }
        }
        let mut commands = Vec::new();
        for (i, c) in root.get("commands").and_then(Json::as_array).cloned().unwrap_or_default().into_iter().enumerate()
        {
            let Json::Object(args) = c else { return input_err(format!("command {} must be an object", i + 1)) };
            let Some(op) = args.get("op").and_then(Json::as_str) else {
                return input_err(format!("command {} has no 'op'", i + 1));
            };
            commands.push(Command { op: op.to_string(), args });
        }
        let sc = Scenario { n, alg, objects, commands };
        sc.validate()?;
        Ok(sc)
    }

    /// Every op is known and every referenced name resolves, counting names
    /// bound by earlier commands through 'as'.
    fn validate(&self) -> PResult<()> {
        let mut names: Vec<String> = self.objects.keys().cloned().collect();
        for (i, c) in self.commands.iter().enumerate() {
            let Some((_, keys)) = OPS.iter().find(|(op, _)| *op == c.op) else {
                return input_err(format!("command {}: unknown op '{}'", i + 1, c.op));
            };
            for key in keys.iter() {
                let (key, optional) = match key.strip_suffix('?') {
                    Some(k) => (k, true),
                    None => (*key, false),
                };
                match c.args.get(key) {
                    Some(Json::String(name)) if names.contains(name) => {}
                    Some(Json::String(name)) => {
                        return input_err(format!("command {} ({}): unknown object '{name}'", i + 1, c.op))
                    }
                    Some(_) => return input_err(format!("command {} ({}): '{key}' must name an object", i + 1, c.op)),
                    None if optional => {}
                    None => return input_err(format!("command {} ({}): missing argument '{key}'", i + 1, c.op)),
                }
            }
            if let Some(Json::String(name)) = c.args.get("as") {
                names.push(name.clone());
            }
        }
        Ok(())
    }
}

// -------------------------------------------------------------- execution

struct Outcome {
    residuals: Vec<Entry>,
    values: Vec<Entry>,
    bind: Option<Object>,
    message: Option<String>,
    forced_fail: bool,
}

impl Outcome {
    fn new() -> Self {
        Outcome { residuals: Vec::new(), values: Vec::new(), bind: None, message: None, forced_fail: false }
    }
}

/// How an error raised while executing a command is classified.
fn is_residual_failure(e: &Error) -> bool {
    matches!(e, Error::NonIntegrableConnection | Error::NotACocycle | Error::MCViolated)
}

pub struct Runner {
    pub scenario: Scenario,
    pub stop_on_fail: bool,
    pub timing: bool,
}

impl Runner {
    pub fn run(mut self) -> Report {
        let mut reports = Vec::new();
        let commands = self.scenario.commands.clone();
        for (i, c) in commands.iter().enumerate() {
            let t = Instant::now();
            let res = self.exec(c);
            let time_ms = self.timing.then(|| t.elapsed().as_secs_f64() * 1e3);
            let rep = match res {
                Ok(o) => {
                    let fail = o.forced_fail || o.residuals.iter().any(|e| !e.zero);
                    if let (Some(obj), Some(Json::String(name))) = (o.bind, c.args.get("as")) {
                        self.scenario.objects.insert(name.clone(), obj);
                    }
                    CommandReport {
                        index: i,
                        op: c.op.clone(),
                        status: if fail { Status::Fail } else { Status::Pass },
                        residuals: o.residuals,
                        values: o.values,
                        message: o.message,
                        time_ms,
                    }
                }
                Err(e) => CommandReport {
                    index: i,
                    op: c.op.clone(),
                    status: if is_residual_failure(&e) { Status::Fail } else { Status::Error },
                    residuals: Vec::new(),
                    values: Vec::new(),
                    message: Some(e.to_string()),
                    time_ms,
                },
            };
            let stop = self.stop_on_fail && rep.status != Status::Pass;
            reports.push(rep);
            if stop {
                break;
            }
        }
        Report { commands: reports, input_error: None }
    }

    fn get(&self, c: &Command, key: &str) -> Result<&Object> {
        let name =
            c.args.get(key).and_then(Json::as_str).ok_or_else(|| Error::Type(format!("missing argument '{key}'")))?;
        self.scenario.objects.get(name).ok_or_else(|| Error::Type(format!("unknown object '{name}'")))
    }

    fn num(&self, c: &Command, key: &str, default: u64) -> Result<u64> {
        match c.args.get(key) {
            None => Ok(default),
            Some(v) => v.as_u64().ok_or_else(|| Error::Type(format!("'{key}' must be a non-negative integer"))),
        }
    }

    fn scalar_arg(&self, c: &Command, key: &str, default: &str) -> Result<Scalar> {
        match c.args.get(key) {
            None => parse_scalar(default, self.scenario.n),
            Some(Json::String(s)) => parse_scalar(s, self.scenario.n),
            Some(_) => Err(Error::Type(format!("'{key}' must be a scalar string"))),
        }
    }

    fn exec(&self, c: &Command) -> Result<Outcome> {
        macro_rules! arg {
            ($key:expr, $variant:ident) => {
                match self.get(c, $key)? {
                    Object::$variant(x) => x,
                    o => {
                        return Err(Error::Type(format!(
                            "'{}' is a {}, expected {}",
                            $key,
                            o.kind(),
                            stringify!($variant)
                        )))
                    }
                }
            };
        }
        let alg = &self.scenario.alg;
        let mut out = Outcome::new();
        match c.op.as_str() {
            "check-courant" => {
                let d = arg!("data", Data);
                let phi = self.scalar_arg(c, "phi", "1")?;
                let r = courant_axioms_residual(d, arg!("u", Section), arg!("v", Section), arg!("w", Section), &phi);
                out.residuals.push(entry("D1", r.d1.is_zero(), print_section(&r.d1)));
                let d2: Vec<String> = r.d2.components().iter().map(print_scalar).collect();
                out.residuals.push(entry("D2", r.d2.is_zero(), format!("({})", d2.join(", "))));
                out.residuals.push(entry("D3", r.d3.is_zero(), print_section(&r.d3)));
                out.residuals.push(entry("D4", r.d4.is_zero(), print_scalar(&r.d4)));
                out.residuals.push(entry("D5", r.d5.is_zero(), print_section(&r.d5)));
            }
            "check-integrability" => {
                let d = arg!("data", Data);
                let f02 = d.curvature().component(0, 2);
                out.residuals.push(lie_entry("F02", &f02));
                if f02.is_zero() {
                    let r = integrability_residual(d)?;
                    for (name, f) in ["(4,0)", "(3,1)", "(2,2)"].iter().zip(&r) {
                        out.residuals.push(form_entry(format!("dH+c(F^F) {name}"), f));
                    }
                }
            }
            "iso-check" => {
                let (d, d2) = (arg!("from", Data), arg!("to", Data));
                let (g, b) = (arg!("g", Gauge), arg!("B", Form));
                out.residuals.push(form_entry("iso", &iso_residual(d, d2, g, b)?));
                if let (Ok(Object::Section(s)), Ok(Object::Section(t))) = (self.get(c, "u"), self.get(c, "v")) {
                    let m = MorphismData::from_certificate(d, d2, g, b)?;
                    let f = |x| apply_morphism(alg, &m, x);
                    let p = pairing_q(alg, &f(s), &f(t)).sub(&pairing_q(alg, s, t));
                    out.residuals.push(entry("pairing", p.is_zero(), print_scalar(&p)));
                    let dq = apply_morphism_qform(alg, &m, &dolbeault_section(d, s)).sub(&dolbeault_section(d2, &f(s)));
                    out.residuals.push(entry("dolbeault", dq.is_zero(), print_qform(&dq)));
                    let br = f(&dorfman(d, s, t)).sub(&dorfman(d2, &f(s), &f(t)));
                    out.residuals.push(entry("bracket", br.is_zero(), print_section(&br)));
                }
            }
            "aut-check" => {
                let th = arg!("connection", Connection);
                out.residuals.push(form_entry("dB-cs", &aut_condition_residual(alg, th, arg!("element", Aut))));
            }
            "cs" => {
                let th = arg!("connection", Connection);
                let cs = chern_simons(alg, th);
                let f = th.curvature();
                out.values.push(form_entry("CS", &cs));
                out.residuals.push(form_entry("dCS-c(F^F)", &cs.d().sub(&alg.pairing(&f, &f))));
            }
            "cs-diff" => {
                let th = arg!("connection", Connection);
                let a = arg!("a", LieForm);
                let v = cs_difference(alg, th, a);
                let th2 = th.shift(a)?;
                let lhs =
                    chern_simons(alg, &th2).sub(&chern_simons(alg, th)).sub(&alg.pairing(&th2.full(), &th.full()).d());
                out.values.push(form_entry("cs_difference", &v));
                out.residuals.push(form_entry("basic-difference", &lhs.sub(&v)));
            }
            "sigma" => {
                let s = sigma_rep(alg, arg!("gauge", Gauge), arg!("connection", Connection))?;
                out.values.push(form_entry("sigma", &s));
                out.residuals.push(form_entry("d sigma", &s.d()));
            }
            "cech-cocycle" => {
                let Object::Cochain1(ch, cov) = self.get(c, "cochain")? else {
                    return Err(Error::Type("'cochain' must be a cochain1".into()));
                };
                for r in cocycle_residual(alg, ch, cov) {
                    let (i, j, k) = r.triple;
                    let t = format!("({},{},{})", i + 1, j + 1, k + 1);
                    out.residuals.push(lie_entry(format!("{t} g"), &r.g));
                    out.residuals.push(form_entry(format!("{t} B"), &r.b));
                }
            }
            "cech-coboundary" => {
                let h = arg!("cochain0", Cochain0);
                let Object::Cochain1(ch, cov) = self.get(c, "cochain")? else {
                    return Err(Error::Type("'cochain' must be a cochain1".into()));
                };
                if h.elems.len() != cov.m {
                    return Err(Error::Dimension(format!(
                        "cochain0 has {} elements, cover has {}",
                        h.elems.len(),
                        cov.m
                    )));
                }
                let res = coboundary_act(alg, h, ch);
                for (&(i, j), x) in &res.entries {
                    out.values.push(lie_entry(format!("g({},{})", i + 1, j + 1), x.g.g()));
                    out.values.push(form_entry(format!("B({},{})", i + 1, j + 1), &x.b));
                }
                for r in cocycle_residual(alg, &res, cov) {
                    let (i, j, k) = r.triple;
                    let t = format!("({},{},{})", i + 1, j + 1, k + 1);
                    out.residuals.push(lie_entry(format!("{t} g"), &r.g));
                    out.residuals.push(form_entry(format!("{t} B"), &r.b));
                }
                out.bind = Some(Object::Cochain1(res, cov.clone()));
            }
            "cech-assemble-h" => {
                let Object::Cochain1(ch, cov) = self.get(c, "cochain")? else {
                    return Err(Error::Type("'cochain' must be a cochain1".into()));
                };
                let a = assemble_h(alg, ch, arg!("family", Family), arg!("C", FormList), cov)?;
                for (i, h) in a.h.iter().enumerate() {
                    out.values.push(form_entry(format!("H{}", i + 1), h));
                }
                for (&(i, j), f) in &a.potential {
                    out.residuals.push(form_entry(format!("potential ({},{})", i + 1, j + 1), f));
                }
                for (&(i, j), f) in &a.globality {
                    out.residuals.push(form_entry(format!("H{}-H{}", i + 1, j + 1), f));
                }
                for (i, f) in a.integrability.iter().enumerate() {
                    out.residuals.push(form_entry(format!("dH{}+c(F^F)", i + 1), f));
                }
            }
            "pontryagin" => {
                let th = arg!("connection", Connection);
                let p = pontryagin_rep(alg, th)?;
                out.values.push(entry("c(F^F)", p.is_zero(), print_by_type(&p)));
                out.residuals.push(form_entry("d", &p.d()));
                if let Ok(Object::Connection(th2)) = self.get(c, "to") {
                    let p2 = pontryagin_rep(alg, th2)?;
                    let pot = connection_change_potential(alg, th, th2);
                    out.values.push(form_entry("potential", &pot));
                    out.residuals.push(form_entry("change", &p2.sub(&p).sub(&pot.d())));
                }
            }
            "dq" => {
                let d = arg!("data", Data);
                let x = arg!("x", LElement);
                let y = d_q(d, x)?;
                out.values.push(lel_entry("d_Q x", &y));
                out.residuals.push(lel_entry("d_Q d_Q x", &d_q(d, &y)?));
                out.bind = Some(Object::LElement(y));
            }
            "dgla-axioms" => {
                let r = dgla_axioms_residual(
                    arg!("data", Data),
                    arg!("x", LElement),
                    arg!("y", LElement),
                    arg!("z", LElement),
                )?;
                out.residuals.push(lel_entry("skew", &r.skew));
                out.residuals.push(lel_entry("jacobi", &r.jacobi));
                out.residuals.push(lel_entry("dq2", &r.dq2));
                out.residuals.push(lel_entry("derivation", &r.derivation));
            }
            "mc-check" => {
                let r = mc_residual(arg!("data", Data), arg!("x", LElement))?;
                out.residuals.push(lie_entry("alpha", &r.alpha));
                out.residuals.push(entry("b", r.b.is_zero(), print_by_type(&r.b)));
            }
            "deform" => {
                let d = arg!("data", Data);
                let x = arg!("x", LElement);
                let r = mc_residual(d, x)?;
                out.residuals.push(lel_entry("mc", &r));
                let force = c.args.get("force").and_then(Json::as_bool).unwrap_or(false);
                if r.is_zero() || force {
                    let d2 = hat_epsilon(d, x)?;
                    out.residuals.push(lie_entry("F'-F-del alpha", &deformed_curvature_residual(d, x)?));
                    match integrability_residual(&d2) {
                        Ok(ir) => {
                            for (name, f) in ["(4,0)", "(3,1)", "(2,2)"].iter().zip(&ir) {
                                out.residuals.push(form_entry(format!("integrability {name}"), f));
                            }
                        }
                        Err(e) => out.message = Some(format!("deformed data: {e}")),
                    }
                    out.values.push(lie_entry("theta", &d2.theta.full()));
                    out.values.push(form_entry("H", &d2.h()));
                    out.bind = Some(Object::Data(d2));
                } else {
                    out.message = Some(Error::MCViolated.to_string());
                }
            }
            "obstruction" => {
                let d = arg!("data", Data);
                let a = arg!("alpha", LieForm);
                match obstruction_rep(d, a) {
                    Err(Error::NotACocycle) => {
                        out.message = Some(Error::NotACocycle.to_string());
                        out.residuals.push(lie_entry("delbar^theta alpha", &d.theta.delbar_theta(a)));
                    }
                    r => {
                        let ob = r?;
                        out.values.push(entry("2c(del alpha^F)", ob.is_zero(), print_by_type(&ob)));
                        out.residuals.push(form_entry("d", &ob.d()));
                    }
                }
            }
            "gauge-act" => {
                let d2 = gauge_act(arg!("element", GaugeElement), arg!("data", Data))?;
                out.values.push(lie_entry("theta", &d2.theta.full()));
                out.values.push(form_entry("H", &d2.h()));
                match integrability_residual(&d2) {
                    Ok(ir) => {
                        for (name, f) in ["(4,0)", "(3,1)", "(2,2)"].iter().zip(&ir) {
                            out.residuals.push(form_entry(format!("integrability {name}"), f));
                        }
                    }
                    Err(e) => {
                        out.message = Some(e.to_string());
                        out.forced_fail = true;
                    }
                }
                out.bind = Some(Object::Data(d2));
            }
            "gauge-infinitesimal" => {
                let d = arg!("data", Data);
                let (al, a, b) = (arg!("alpha", LieForm), arg!("a", LieForm), arg!("b", Form));
                let l = infinitesimal_action(d, al, a, b)?;
                let fo = first_order_gauge(d, al, a, b)?;
                out.values.push(form_entry("Hdot", &l.hdot));
                out.values.push(lie_entry("thetadot", &l.thetadot));
                let r = fo.sub(&l);
                out.residuals.push(form_entry("first-order Hdot", &r.hdot));
                out.residuals.push(lie_entry("first-order thetadot", &r.thetadot));
                out.bind = Some(Object::Tangent(l));
            }
            "phi-epsilon" => {
                let d = arg!("data", Data);
                let x = arg!("x", LElement);
                let back = phi_map(d, &d_hat_epsilon0(x))?;
                out.residuals.push(lel_entry("phi(d eps(x)) - x", &back.sub(x)?));
                if let Ok(Object::Tangent(t)) = self.get(c, "tangent") {
                    let (a, h) = tangent_integrability_residual(d, t);
                    out.residuals.push(lie_entry("tangent delbar", &a));
                    out.residuals.push(form_entry("tangent d", &h));
                    let p = phi_map(d, t)?;
                    out.values.push(lel_entry("phi(t)", &p));
                    out.residuals.push(lel_entry("d_Q phi(t)", &d_q(d, &p)?));
                }
            }
            "fuzz" => {
                let m = match c.args.get("mutation").and_then(Json::as_str) {
                    Some(s) => s.parse::<Mutation>().map_err(Error::Type)?,
                    None => Mutation::None,
                };
                let cfg = FuzzConfig {
                    seed: self.num(c, "seed", 0)?,
                    cases: self.num(c, "cases", 100)? as usize,
                    gen: GenConfig {
                        n: self.num(c, "n", 2)? as usize,
                        deg: self.num(c, "deg", 2)? as u32,
                        ..GenConfig::default()
                    },
                    k: self.num(c, "k", 2)? as usize,
                    mutation: m,
                    ..FuzzConfig::default()
                };
                let r = run_fuzz(&cfg)?;
                out.values.push(entry("cases", true, r.cases_run.to_string()));
                if let Some(ce) = r.counterexample {
                    out.residuals.push(entry(
                        format!("{} case {}", ce.property, ce.case),
                        false,
                        format!("{:?} witness {:?}", ce.shrunk_failing, ce.witness),
                    ));
                }
            }
            other => return Err(Error::Type(format!("unknown op '{other}'"))),
        }
        Ok(out)
    }
}

/// Parses and runs a scenario text.
pub fn run_text(text: &str, stop_on_fail: bool, timing: bool) -> Report {
    match Scenario::parse(text) {
        Ok(scenario) => Runner { scenario, stop_on_fail, timing }.run(),
        Err(e) => Report::input_failure(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIVIAL: &str = r#"{
        "n": 2,
        "objects": {
            "D": {"type": "string-data"},
            "u": {"type": "section", "v": ["z1", "1"], "r": [["zb1", "0"], ["0", "z2"]], "xi": "z1*dz2"},
            "v": {"type": "section", "v": ["zb2", "0"], "xi": "dz1"},
            "w": {"type": "section", "v": ["0", "z1*z2"], "r": [["0", "1"], ["0", "0"]]}
        },
        "commands": [{"op": "check-courant", "data": "D", "u": "u", "v": "v", "w": "w", "phi": "z1*zb2"}]
    }"#;

    #[test]
    fn trivial_courant_passes() {
        let r = run_text(TRIVIAL, false, false);
        assert_eq!(r.exit_code(), 0, "{}", r.to_text());
        assert_eq!(r.commands[0].residuals.len(), 5);
    }

    #[test]
    fn missing_object_is_input_error() {
        let bad = TRIVIAL.replace(r#""w": "w""#, r#""w": "nope""#);
        let r = run_text(&bad, false, false);
        assert_eq!(r.exit_code(), 2);
        assert!(r.input_error.unwrap().contains("nope"));
    }

    #[test]
    fn bad_form_names_the_object() {
        let bad = TRIVIAL.replace("z1*dz2", "z1**dz2");
        let r = run_text(&bad, false, false);
        assert_eq!(r.exit_code(), 2);
        assert!(r.input_error.unwrap().contains("object 'u'"));
    }

    #[test]
    fn json_errors_carry_position() {
        let r = run_text("{\n  \"n\": 2,\n  oops\n}", false, false);
        assert_eq!(r.exit_code(), 2);
        assert!(r.input_error.unwrap().starts_with("line 3"));
    }

    #[test]
    fn results_bind_for_later_commands() {
        let s = r#"{
            "n": 2,
            "objects": {
                "D": {"type": "string-data"},
                "x": {"type": "gauge-element", "g": [["1", "zb1"], ["0", "1"]], "g_inv": [["1", "-zb1"], ["0", "1"]], "B": "z1*dz1^dz2"}
            },
            "commands": [
                {"op": "gauge-act", "element": "x", "data": "D", "as": "D2"},
                {"op": "check-integrability", "data": "D2"}
            ]
        }"#;
        let r = run_text(s, false, false);
        assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    }

    #[test]
    fn report_is_deterministic_without_timing() {
        let a = serde_json::to_string(&run_text(TRIVIAL, false, false)).unwrap();
        let b = serde_json::to_string(&run_text(TRIVIAL, false, false)).unwrap();
        assert_eq!(a, b);
    }
}
