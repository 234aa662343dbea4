//! Canonical JSON: sorted keys, no whitespace, integers as decimal strings,
//! rationals as `"p/q"` strings.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::balance::{BalanceVerdict, PartnerReport, SelfBalanceVerdict};
use crate::error::{Error, Result};
use crate::exactlat::{IntMatrix, Matrix, RatMatrix};
use crate::formring::{make_ring, BinaryForm, Lattice, RingRf, ThetaVec};
use crate::groups::{GL2Elem, OrbitReport};
use crate::tensorlink::{BalancedPair, RfModule, Side, Tensor2nn};

/// Compact serialization; `serde_json` maps keep keys sorted.
pub fn to_canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("values always serialize")
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn rat(q: &BigRational) -> Value {
    Value::String(format!("{}/{}", q.numer(), q.denom()))
}

pub fn int_from(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integer literal")),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

pub fn rat_from(v: &Value) -> Result<BigRational> {
    if let Value::String(s) = v {
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(BigRational::new(p, q));
        }
    }
    int_from(v).map(BigRational::from_integer)
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

pub fn int_matrix(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(int).collect())).collect())
}

pub fn rat_matrix(m: &RatMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(rat).collect())).collect())
}

pub fn int_matrix_from(v: &Value) -> Result<IntMatrix> {
    let rows = array(v, "matrix")?
        .iter()
        .map(|r| array(r, "matrix row")?.iter().map(int_from).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    Matrix::from_rows(&rows).map_err(|e| Error::Parse(e.to_string()))
}

pub fn theta_vec(x: &ThetaVec) -> Value {
    Value::Array(x.coords().iter().map(rat).collect())
}

pub fn theta_vec_from(v: &Value) -> Result<ThetaVec> {
    Ok(ThetaVec(array(v, "element")?.iter().map(rat_from).collect::<Result<_>>()?))
}

pub fn form(f: &BinaryForm) -> Value {
    json!({ "coeffs": f.coeffs().iter().map(int).collect::<Vec<_>>() })
}

/// Accepts `{"coeffs": [...]}` or a bare array.
pub fn form_from(v: &Value) -> Result<BinaryForm> {
    let coeffs = match v {
        Value::Object(_) => field(v, "coeffs")?,
        other => other,
    };
    BinaryForm::new(array(coeffs, "coeffs")?.iter().map(int_from).collect::<Result<_>>()?)
}

pub fn tensor(a: &Tensor2nn) -> Value {
    json!({ "n": a.n(), "A1": int_matrix(a.a1()), "A2": int_matrix(a.a2()) })
}

pub fn tensor_from(v: &Value) -> Result<Tensor2nn> {
    let a = Tensor2nn::new(int_matrix_from(field(v, "A1")?)?, int_matrix_from(field(v, "A2")?)?)
        .map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(n) = v.get("n") {
        if n.as_u64() != Some(a.n() as u64) {
            return Err(Error::Parse(format!("field n = {n} disagrees with matrix size {}", a.n())));
        }
    }
    Ok(a)
}

pub fn gl2(g: &GL2Elem) -> Value {
    Value::Array(g.entries().iter().map(|x| int(x)).collect())
}

pub fn gl2_from(v: &Value) -> Result<GL2Elem> {
    let e = array(v, "transport")?.iter().map(int_from).collect::<Result<Vec<_>>>()?;
    let [a, b, c, d]: [BigInt; 4] = e.try_into().map_err(|_| Error::Parse("transport needs 4 entries".into()))?;
    GL2Elem::new(a, b, c, d).map_err(|e| Error::Parse(e.to_string()))
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Row => "row",
        Side::Column => "column",
    }
}

fn module(m: &RfModule) -> Value {
    json!({
        "side": side_name(m.side()),
        "actions": m.actions().iter().map(int_matrix).collect::<Vec<_>>(),
    })
}

fn module_from(ring: &Arc<RingRf>, v: &Value, side: Side) -> Result<RfModule> {
    if field(v, "side")?.as_str() != Some(side_name(side)) {
        return Err(Error::Parse(format!("expected a {} module", side_name(side))));
    }
    let actions = array(field(v, "actions")?, "actions")?.iter().map(int_matrix_from).collect::<Result<_>>()?;
    RfModule::new(ring.clone(), side, actions)
}

/// `form` is the form of the ring the modules live over (after transport).
pub fn pair(p: &BalancedPair) -> Value {
    json!({
        "form": form(p.ring().form()),
        "transport": gl2(p.transport()),
        "M": module(p.m()),
        "N": module(p.n()),
        "pairing": p.pairing().iter().map(|row| row.iter().map(theta_vec).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "tensor": tensor(p.tensor()),
    })
}

/// Rebuilds and revalidates a pair; the stored tensor must match the pairing.
pub fn pair_from(v: &Value) -> Result<BalancedPair> {
    let f = form_from(field(v, "form")?)?;
    let ring = Arc::new(make_ring(&f)?);
    let transport = gl2_from(field(v, "transport")?)?;
    let m = module_from(&ring, field(v, "M")?, Side::Row)?;
    let n = module_from(&ring, field(v, "N")?, Side::Column)?;
    let pairing = array(field(v, "pairing")?, "pairing")?
        .iter()
        .map(|row| array(row, "pairing row")?.iter().map(theta_vec_from).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let p = BalancedPair::new(ring, transport, m, n, pairing)?;
    if let Some(t) = v.get("tensor") {
        if &tensor_from(t)? != p.tensor() {
            return Err(Error::InvariantViolation("stored tensor disagrees with the pairing".into()));
        }
    }
    Ok(p)
}

pub fn lattice(l: &Lattice) -> Value {
    rat_matrix(l.basis())
}

pub fn lattice_from(v: &Value) -> Result<Lattice> {
    let rows = array(v, "lattice")?
        .iter()
        .map(|r| array(r, "lattice row")?.iter().map(rat_from).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let m: RatMatrix = Matrix::from_rows(&rows).map_err(|e| Error::Parse(e.to_string()))?;
    Lattice::from_basis_matrix(&m)
}

/// Structure constants, discriminant, `I_f`, `J_f` and their indices.
pub fn ring_report(original: &BinaryForm, transport: &GL2Elem, ring: &RingRf) -> Value {
    let (i_f, j_f) = ring.make_if_jf();
    let n = ring.degree();
    let consts: Vec<Value> = (0..n)
        .map(|i| {
            Value::Array(
                (0..n).map(|j| Value::Array(ring.struct_consts()[i][j].iter().map(int).collect())).collect(),
            )
        })
        .collect();
    json!({
        "form": form(original),
        "transport": gl2(transport),
        "ring_form": form(ring.form()),
        "disc": int(&original.discriminant()),
        "primitive": original.is_primitive(),
        "zeta": (0..n).map(|k| theta_vec(ring.zeta(k))).collect::<Vec<_>>(),
        "struct_consts": consts,
        "I_f": lattice(&i_f),
        "J_f": lattice(&j_f),
        "index_J_I": rat(&j_f.index_of(&i_f)),
        "norm_I": rat(&ring.ideal_norm(&i_f).expect("nonsingular")),
        "norm_J": rat(&ring.ideal_norm(&j_f).expect("nonsingular")),
    })
}

pub fn verdict(v: &BalanceVerdict) -> Value {
    json!({
        "contained": v.contained,
        "norm_ok": v.norm_ok,
        "index_ok": v.index_ok,
        "criteria_agree": v.criteria_agree,
        "norms": { "M": rat(&v.norm_m), "N": rat(&v.norm_n), "If": rat(&v.norm_if) },
    })
}

pub fn self_verdict(v: &SelfBalanceVerdict) -> Value {
    json!({
        "contained": v.contained,
        "norm_ok": v.norm_ok,
        "quotient_ok": v.quotient_ok,
        "norms": { "M": rat(&v.norm_m), "k": rat(&v.norm_k), "If": rat(&v.norm_if) },
    })
}

pub fn partner(r: &PartnerReport) -> Value {
    let mut out = Map::new();
    out.insert("partner".into(), lattice(r.partner.lattice()));
    out.insert("guaranteed".into(), Value::Bool(r.guaranteed));
    let f = r.partner.ring().form();
    if !f.is_primitive() || f.discriminant().is_zero() {
        out.insert("flag".into(), Value::String("form is not primitive and nondegenerate".into()));
    } else if !r.guaranteed {
        out.insert("flag".into(), Value::String("partner existence not guaranteed".into()));
    }
    out.insert("verdict".into(), verdict(&r.verdict));
    Value::Object(out)
}

pub fn orbit_report(r: &OrbitReport) -> Value {
    json!({
        "form": form(&r.form),
        "entry_bound": r.entry_bound,
        "move_budget": r.move_budget,
        "members": r.members.len(),
        "classes": r.classes.iter().map(|c| json!({
            "representative": tensor(&c.representative),
            "size_in_box": c.size_in_box,
        })).collect::<Vec<_>>(),
        "budget_limited": r.budget_limited,
    })
}
