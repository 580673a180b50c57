//! Run configuration, the JSON certificate (schema version 1) and its CSV
//! companion tables.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bundle::{line_power, make_sym_quotient, BundleRec};
use crate::cohomology::{chi, h0_dim, h1_dim, phi_report, PhiReport};
use crate::curve::{
    curve_init_with_precision, h0_inf_count, sample_points_seeded, semigroup_gap_count,
    verify_translation_identity, CurveCtx, CurveParams, DivisorRec, PointRec,
};
use crate::error::{Error, Result};
use crate::ff::{FieldDesc, FieldElem, DEFAULT_SPLIT_SEED};
use crate::series::verify_differential_identities;
use crate::surface::{
    adjoint_summands, base_point_certificate, check_gates, positivity, BasePointRecord, GateReport,
    IntersectionForm, ParamsRec, PositivityReport, Verdict,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub p: u64,
    pub n: u32,
    pub e: u64,
    pub m: i64,
    /// Largest extension degree searched for fiber points.
    pub kmax: u32,
    /// Number of points `Q` swept across fibers.
    pub fibers: usize,
    pub precision: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(p: u64, n: u32, e: u64, m: i64) -> RunConfig {
        RunConfig {
            command: "certify".into(),
            p,
            n,
            e,
            m,
            kmax: 8,
            fibers: 12,
            precision: None,
            out: None,
            seed: DEFAULT_SPLIT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u64,
    pub k: u32,
    /// Coefficients of the monic modulus, constant term first.
    pub modulus: Vec<u64>,
}

impl FieldJson {
    fn of(f: &FieldDesc) -> FieldJson {
        FieldJson {
            p: f.characteristic(),
            k: f.degree(),
            modulus: f.modulus().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub k: u32,
    pub z: Vec<u64>,
    pub y1: Vec<u64>,
}

impl PointJson {
    pub fn of(pt: &PointRec) -> PointJson {
        PointJson {
            k: pt.field.degree(),
            z: pt.field.to_coeffs(pt.z),
            y1: pt.field.to_coeffs(pt.y1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub genus: i64,
    pub gap_count: u64,
    pub h0_canonical: usize,
    pub semigroup_generators: (u64, u64),
    pub identity_checks: Vec<CheckJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleJson {
    pub name: String,
    pub rank: usize,
    pub degree: i64,
    pub h0: usize,
    pub h1: usize,
    pub chi: i64,
    pub riemann_roch: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropMainJson {
    #[serde(rename = "Q")]
    pub q: PointJson,
    #[serde(rename = "h0_noQ")]
    pub h0_no_q: usize,
    #[serde(rename = "h0_withQ")]
    pub h0_with_q: usize,
    pub iso: bool,
    pub fingerprint_no_q: String,
    pub fingerprint_with_q: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandJson {
    pub name: String,
    pub rank: usize,
    pub h0: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualJson {
    /// `P_a(Q)` per frame index.
    pub coordinates: Vec<Vec<u64>>,
    /// `sum_a P_a(Q) w^a`.
    pub value: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePointJson {
    #[serde(rename = "Q")]
    pub q: PointJson,
    pub w: Vec<u64>,
    pub h0_total: usize,
    pub summands: Vec<SummandJson>,
    pub residuals: Vec<ResidualJson>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepJson {
    pub points: usize,
    pub certified: usize,
    pub pass_fraction: f64,
    pub exceptional: Vec<PointJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineJson {
    pub moduli: Vec<FieldJson>,
    pub precision: usize,
    pub seed: u64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionJson {
    pub sigma1_squared: String,
    pub sigma1_sigma2: String,
    pub gamma1_squared: String,
    pub gamma2_squared: String,
    pub positivity: PositivityJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityJson {
    pub deg_r: i64,
    pub a_squared: String,
    pub a_gamma1: String,
    pub a_gamma2: String,
    pub a_fiber: String,
    pub pass: bool,
}

impl From<PositivityReport> for PositivityJson {
    fn from(r: PositivityReport) -> Self {
        PositivityJson {
            deg_r: r.deg_r,
            a_squared: r.a_squared.to_string(),
            a_gamma1: r.a_gamma1.to_string(),
            a_gamma2: r.a_gamma2.to_string(),
            a_fiber: r.a_fiber.to_string(),
            pass: r.pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub config: RunConfig,
    pub params: ParamsRec,
    pub gates: GateReport,
    pub curve: CurveJson,
    pub intersections: IntersectionJson,
    pub bundles: Vec<BundleJson>,
    pub phi: Vec<PhiReport>,
    pub prop_main: Vec<PropMainJson>,
    pub base_point: BasePointJson,
    pub sweep: SweepJson,
    pub assumptions: Vec<String>,
    pub engine: EngineJson,
}

impl Certificate {
    /// Everything the certificate asserts holds, and the chosen point is certified.
    pub fn passes(&self) -> bool {
        self.base_point.verdict == Verdict::BasePointCertified
            && self.curve.identity_checks.iter().all(|c| c.pass)
            && self.bundles.iter().all(|b| b.riemann_roch)
            && self.intersections.positivity.pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

const ASSUMPTIONS: [&str; 3] = [
    "a degree one divisor R_Q with m R_Q ~ (m-1) inf + Q exists by divisibility of Pic^0; only its class is used",
    "ampleness of A = Gamma_1 + f*R is supported by intersection positivity, not verified on all curves",
    "summands other than the first vanish along Gamma_2 by the grading of the cover algebra; they are not evaluated",
];

pub(crate) fn curve_summary(ctx: &CurveCtx) -> Result<CurveJson> {
    let (a, b) = ctx.semigroup_generators;
    let mut identity_checks: Vec<CheckJson> =
        verify_differential_identities(ctx.params, &ctx.series)
            .into_iter()
            .map(|c| CheckJson {
                detail: c.first_failure.map(|e| format!("first mismatch at y^{e}")),
                name: c.name,
                pass: c.pass,
            })
            .collect();
    let t = verify_translation_identity(ctx)?;
    identity_checks.push(CheckJson {
        name: "translation identity".into(),
        pass: t.pass(),
        detail: t.witness.clone(),
    });
    let canonical = crate::bundle::make_line_bundle(
        ctx,
        DivisorRec::at_infinity(ctx.params.canonical_degree()),
    )?;
    let h0_canonical = h0_dim(ctx, &canonical)?;
    let gap_count = semigroup_gap_count(a, b);
    identity_checks.push(CheckJson {
        name: "genus agreement".into(),
        pass: gap_count as i64 == ctx.genus && h0_canonical as i64 == ctx.genus,
        detail: Some(format!(
            "formula {}, gaps {gap_count}, h0(omega) {h0_canonical}",
            ctx.genus
        )),
    });
    Ok(CurveJson {
        genus: ctx.genus,
        gap_count,
        h0_canonical,
        semigroup_generators: (a, b),
        identity_checks,
    })
}

pub fn bundle_row(ctx: &CurveCtx, b: &BundleRec) -> Result<BundleJson> {
    let h0 = h0_dim(ctx, b)?;
    let h1 = h1_dim(ctx, b)?;
    let chi = chi(ctx, b)?;
    Ok(BundleJson {
        name: b.name.clone(),
        rank: b.rank,
        degree: b.degree()?,
        h0,
        h1,
        chi,
        riemann_roch: h0 as i64 - h1 as i64 == chi,
    })
}

fn field_elem(f: &FieldDesc, a: FieldElem) -> Vec<u64> {
    f.to_coeffs(a)
}

fn prop_main_json(rec: &BasePointRecord) -> PropMainJson {
    PropMainJson {
        q: PointJson::of(&rec.point),
        h0_no_q: rec.prop_main.h0_no_q,
        h0_with_q: rec.prop_main.h0_with_q,
        iso: rec.prop_main.iso,
        fingerprint_no_q: rec.prop_main.fingerprint_no_q.clone(),
        fingerprint_with_q: rec.prop_main.fingerprint_with_q.clone(),
        verdict: rec.verdict,
    }
}

/// Runs the base-point check over a deterministic sweep of points and
/// assembles the certificate.
pub fn certify(cfg: &RunConfig) -> Result<Certificate> {
    let gates = check_gates(cfg.p, cfg.n, cfg.e, cfg.m)?;
    let params = gates.params()?;
    let ctx = curve_init_with_precision(CurveParams::new(cfg.p, cfg.n, cfg.e), cfg.precision)?;
    let points = sample_points_seeded(&ctx, cfg.fibers, cfg.kmax, cfg.seed)?;
    if points.is_empty() {
        return Err(Error::InadmissiblePoint(format!(
            "no admissible points over fields of degree <= {}",
            cfg.kmax
        )));
    }
    let records: Vec<BasePointRecord> = points
        .par_iter()
        .map(|pt| base_point_certificate(&ctx, &params, pt))
        .collect::<Result<_>>()?;
    let chosen = records
        .iter()
        .find(|r| r.verdict == Verdict::BasePointCertified)
        .unwrap_or(&records[0]);
    let certified = records
        .iter()
        .filter(|r| r.verdict == Verdict::BasePointCertified)
        .count();

    let q = params.q;
    let delta = DivisorRec::at_infinity(-params.big_n);
    let mut bundles: Vec<BundleRec> = Vec::new();
    for r in 0..=q - 2 {
        bundles.push(make_sym_quotient(&ctx, r, delta.clone())?);
    }
    for i in 0..=q {
        bundles.push(line_power(&ctx, i, delta.clone())?);
    }
    bundles.extend(
        adjoint_summands(&ctx, &params, &chosen.point)?
            .into_iter()
            .filter(|s| s.bundle.rank > 0)
            .map(|s| s.bundle),
    );
    let bundle_rows: Vec<BundleJson> = bundles
        .par_iter()
        .map(|b| bundle_row(&ctx, b))
        .collect::<Result<_>>()?;
    let phi: Vec<PhiReport> = (0..=q - 2)
        .map(|r| phi_report(&ctx, r, params.m))
        .collect::<Result<_>>()?;

    let form = IntersectionForm::new(&ctx);
    let intersections = IntersectionJson {
        sigma1_squared: form.intersect(form.sigma1(), form.sigma1())?.to_string(),
        sigma1_sigma2: form.intersect(form.sigma1(), form.sigma2())?.to_string(),
        gamma1_squared: form.intersect(form.gamma1(), form.gamma1())?.to_string(),
        gamma2_squared: form.intersect(form.gamma2(), form.gamma2())?.to_string(),
        positivity: positivity(&form, 1)?.into(),
    };

    let f = &*chosen.point.field;
    let base_point = BasePointJson {
        q: PointJson::of(&chosen.point),
        w: field_elem(f, chosen.w),
        h0_total: chosen.h0_total,
        summands: chosen
            .summand_dims
            .iter()
            .zip(adjoint_summands(&ctx, &params, &chosen.point)?)
            .map(|((name, h0), s)| SummandJson {
                name: name.clone(),
                rank: s.bundle.rank,
                h0: *h0,
            })
            .collect(),
        residuals: chosen
            .evaluations
            .iter()
            .map(|ev| ResidualJson {
                coordinates: ev.coordinates.iter().map(|&c| field_elem(f, c)).collect(),
                value: field_elem(f, ev.value),
            })
            .collect(),
        verdict: chosen.verdict,
    };

    let mut moduli = vec![FieldJson::of(ctx.field())];
    for pt in &points {
        let fj = FieldJson::of(&pt.field);
        if !moduli.contains(&fj) {
            moduli.push(fj);
        }
    }

    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        params,
        gates,
        curve: curve_summary(&ctx)?,
        intersections,
        bundles: bundle_rows,
        phi,
        prop_main: records.iter().map(prop_main_json).collect(),
        base_point,
        sweep: SweepJson {
            points: records.len(),
            certified,
            pass_fraction: certified as f64 / records.len() as f64,
            exceptional: records
                .iter()
                .filter(|r| r.verdict != Verdict::BasePointCertified)
                .map(|r| PointJson::of(&r.point))
                .collect(),
        },
        assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
        engine: EngineJson {
            moduli,
            precision: ctx.series.precision,
            seed: cfg.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

/// Line bundles at infinity against the semigroup count, for tables.
pub fn line_bundle_rows(
    ctx: &CurveCtx,
    degrees: impl IntoIterator<Item = i64>,
) -> Result<Vec<(BundleJson, usize)>> {
    degrees
        .into_iter()
        .map(|d| {
            let b = crate::bundle::make_line_bundle(ctx, DivisorRec::at_infinity(d))?;
            Ok((bundle_row(ctx, &b)?, h0_inf_count(ctx, d)))
        })
        .collect()
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("certificate");
    path.with_file_name(format!("{stem}.{suffix}.csv"))
}

/// Writes `<stem>.bundles.csv`, `<stem>.prop_main.csv` and `<stem>.phi.csv`
/// next to `path`; returns the paths written.
pub fn write_tables(cert: &Certificate, path: &Path) -> Result<Vec<PathBuf>> {
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    let bundles = sibling(path, "bundles");
    let mut w = csv::Writer::from_path(&bundles).map_err(csv_err)?;
    w.write_record(["name", "rank", "degree", "h0", "h1", "chi", "riemann_roch"])
        .map_err(csv_err)?;
    for b in &cert.bundles {
        w.write_record([
            b.name.clone(),
            b.rank.to_string(),
            b.degree.to_string(),
            b.h0.to_string(),
            b.h1.to_string(),
            b.chi.to_string(),
            b.riemann_roch.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;

    let prop = sibling(path, "prop_main");
    let mut w = csv::Writer::from_path(&prop).map_err(csv_err)?;
    w.write_record(["k", "z", "y1", "h0_noQ", "h0_withQ", "iso", "verdict"])
        .map_err(csv_err)?;
    let coeffs = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    for r in &cert.prop_main {
        w.write_record([
            r.q.k.to_string(),
            coeffs(&r.q.z),
            coeffs(&r.q.y1),
            r.h0_no_q.to_string(),
            r.h0_with_q.to_string(),
            r.iso.to_string(),
            format!("{:?}", r.verdict),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;

    let phi = sibling(path, "phi");
    let mut w = csv::Writer::from_path(&phi).map_err(csv_err)?;
    w.write_record([
        "r",
        "m",
        "N",
        "h0_Sr",
        "h0_Sr1",
        "h0_L",
        "h1_L",
        "phi_rank",
        "surjective",
        "W_codim",
    ])
    .map_err(csv_err)?;
    for p in &cert.phi {
        w.write_record([
            p.r.to_string(),
            p.m.to_string(),
            p.big_n.to_string(),
            p.dims.h0_sq_r.to_string(),
            p.dims.h0_sq_r1.to_string(),
            p.dims.h0_l.to_string(),
            p.dims.h1_l.to_string(),
            p.phi_rank.to_string(),
            p.surjective.to_string(),
            p.w_codim.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(vec![bundles, prop, phi])
}
