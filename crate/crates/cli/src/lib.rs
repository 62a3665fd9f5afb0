//! The `tql` command line. [`run`] parses an argv, resolves the family,
//! dispatches to `tql-core` and writes one JSON report (plus CSV for
//! `hplot`). Reports are deterministic for a fixed seed and configuration.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::io::{Read, Write};
use std::path::PathBuf;
use tql_core::bitangents::{
    find_bitangents, real_bitangents, steiner_partition, PlaneQuarticCurve,
};
use tql_core::conics::{
    section_on_h_lambda, split_double_cover, verify_touching, TouchingConicDescriptor,
};
use tql_core::lattice::{
    enumerate_minus_one, fifty_six_catalog, octagon_config, real_pairs, Constraints,
};
use tql_core::moduli::{
    b_threshold, fixed_lambda0, g_coefficient_mismatch, involution_g, to_quartic, ModuliPoint,
};
use tql_core::resolutions::{
    admissible_resolutions, behavior_table, sample_h, HFunction, ResolutionChoice,
};
use tql_core::surface::{
    classify_plane, classify_singularities, condition_a_check, plane_section, random_nodal_plane,
    random_smooth_plane, PlaneChart, ProjPoint, QuarticFamily, SingularityKind, Status,
};
use tql_core::{Error, Tolerances};

pub const SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "tql",
    version,
    about = "Numerical workbench for a family of real quartic surfaces"
)]
struct Cli {
    /// General residual tolerance; overrides TQL_TOL.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for every random choice; recorded in the report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// The family, by coefficients, by moduli, or as JSON on standard input.
/// Without any of these the reference family (1, 2, 2) in moduli is used.
#[derive(Args, Debug, Clone, Default)]
struct FamilyArgs {
    /// Third root of f(λ) = λ(λ+1)(λ−a); must be positive.
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Q(λ) = bλ² + cλ + d, or with --lambda0 the moduli b.
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Linear coefficient of Q.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "lambda0")]
    c: Option<f64>,
    /// Constant term of Q.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "lambda0")]
    d: Option<f64>,
    /// With --a and --b: the tangency parameter of the moduli chart.
    #[arg(long, allow_negative_numbers = true)]
    lambda0: Option<f64>,
    /// A moduli point; the family is built from it.
    #[arg(long, num_args = 3, value_names = ["A", "LAMBDA0", "B"], allow_negative_numbers = true,
          conflicts_with_all = ["a", "b", "c", "d", "lambda0"])]
    moduli: Option<Vec<f64>>,
}

#[derive(Args, Debug, Clone)]
struct PlaneArgs {
    /// random-smooth, random-nodal, lambda=<λ> (the plane x0 = λ·x1) or
    /// four comma-separated real coefficients r0,r1,X,Y.
    #[arg(long, default_value = "random-smooth", value_parser = parse_plane)]
    plane: PlaneSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum ConicKind {
    Generic,
    Special,
    Orbit,
}

#[derive(Args, Debug, Clone)]
struct ConicArgs {
    #[arg(long, value_enum, default_value_t = ConicKind::Generic)]
    kind: ConicKind,
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    /// Pencil parameter for generic and special conics.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    theta: f64,
    /// Orbit constant for orbit conics.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    alpha: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Condition (A) with its double root λ₀.
    Check(FamilyArgs),
    /// The family of a moduli point (a, λ₀, b).
    FromModuli {
        #[arg(allow_negative_numbers = true)]
        a: f64,
        #[arg(allow_negative_numbers = true)]
        lambda0: f64,
        #[arg(allow_negative_numbers = true)]
        b: f64,
    },
    /// Singular points of the surface.
    Singularities(FamilyArgs),
    /// Classify a real plane and print its section.
    Section {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        plane: PlaneArgs,
    },
    /// Bitangents of a plane section.
    Bitangents {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        plane: PlaneArgs,
        /// Also partition the pairs of a smooth catalog into Steiner complexes.
        #[arg(long)]
        steiner: bool,
    },
    /// Check that a conic on the plane x0 = λ·x1 touches the section.
    Touching {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        conic: ConicArgs,
    },
    /// Split the preimage of a touching conic in the double cover.
    Split {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        conic: ConicArgs,
    },
    /// Samples of an h-function as CSV `lambda,value,interval`.
    Hplot {
        #[command(flatten)]
        family: FamilyArgs,
        /// Index 0..=3 of the h-function.
        #[arg(long, default_value_t = 0)]
        h: u8,
        /// Resolution l1,l2,l3, required for h1..h3.
        #[arg(long, value_parser = parse_res)]
        res: Option<ResolutionChoice>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Write the CSV here; without it the CSV goes to standard output
        /// and the report only to --out.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Admissible small resolutions, or the behaviour tables of one.
    Resolve {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_parser = parse_res)]
        res: Option<ResolutionChoice>,
    },
    /// Validity, b-threshold and involution image of a moduli point.
    Moduli(FamilyArgs),
    /// Run the invariant suite on the family; nonzero exit on any failure.
    VerifyAll(FamilyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlaneSpec {
    RandomSmooth,
    RandomNodal,
    Lambda(f64),
    Explicit([f64; 4]),
}

/// Parse a `--plane` value.
pub fn parse_plane(s: &str) -> Result<PlaneSpec, String> {
    let t = s.trim();
    match t {
        "random-smooth" => return Ok(PlaneSpec::RandomSmooth),
        "random-nodal" => return Ok(PlaneSpec::RandomNodal),
        _ => {}
    }
    if let Some(v) = t.strip_prefix("lambda=") {
        let l: f64 = v
            .trim()
            .parse()
            .map_err(|e| format!("bad λ in {s:?}: {e}"))?;
        return if l.is_finite() {
            Ok(PlaneSpec::Lambda(l))
        } else {
            Err(format!("λ must be finite in {s:?}"))
        };
    }
    let parts: Vec<&str> = t.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("unknown plane {s:?}"));
    }
    let mut h = [0.0f64; 4];
    for (slot, p) in h.iter_mut().zip(&parts) {
        *slot = p
            .trim()
            .parse()
            .map_err(|e| format!("bad coefficient {p:?}: {e}"))?;
    }
    if h.iter().any(|x| !x.is_finite()) || h.iter().all(|&x| x == 0.0) {
        return Err(format!("plane {s:?} must be finite and nonzero"));
    }
    Ok(PlaneSpec::Explicit(h))
}

/// Parse a `--res` value such as `x1,x0+x1,x0`.
pub fn parse_res(s: &str) -> Result<ResolutionChoice, String> {
    s.parse::<ResolutionChoice>().map_err(|e| e.to_string())
}

/// Read a family from JSON: either `{"a":..,"b":..,"c":..,"d":..}` or a
/// report carrying such an object under `family`.
pub fn parse_family_json(s: &str) -> Result<QuarticFamily, Error> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    let inner = match v.get("family") {
        Some(f) if f.is_object() => f.clone(),
        _ => v,
    };
    QuarticFamily::from_json(&inner.to_string())
}

/// Read a moduli point from JSON: `{"a":..,"lambda0":..,"b":..}` or a
/// report carrying one under `point`.
pub fn parse_moduli_json(s: &str) -> Result<ModuliPoint, Error> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    let inner = match v.get("point") {
        Some(p) if p.is_object() => p.clone(),
        _ => v,
    };
    ModuliPoint::from_json(&inner.to_string())
}

const REFERENCE: (f64, f64, f64) = (1.0, 2.0, 2.0);

/// Where a command's input came from, kept in the report.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Source {
    Flags,
    Moduli,
    Stdin,
    Reference,
}

struct Ctx<'a> {
    tol: Tolerances,
    seed: u64,
    stdin: &'a mut dyn Read,
    stdin_text: Option<String>,
}

impl Ctx<'_> {
    fn stdin(&mut self) -> Result<&str, Error> {
        if self.stdin_text.is_none() {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Error::Parse(format!("reading standard input: {e}")))?;
            self.stdin_text = Some(s);
        }
        Ok(self.stdin_text.as_deref().unwrap_or_default())
    }

    fn family(&mut self, f: &FamilyArgs) -> Result<(QuarticFamily, Source), Error> {
        if let Some(m) = &f.moduli {
            return Ok((to_quartic(m[0], m[1], m[2])?, Source::Moduli));
        }
        if let Some(l0) = f.lambda0 {
            let (Some(a), Some(b)) = (f.a, f.b) else {
                return Err(Error::Parse("--lambda0 needs --a and --b".into()));
            };
            return Ok((to_quartic(a, l0, b)?, Source::Moduli));
        }
        match (f.a, f.b, f.c, f.d) {
            (Some(a), Some(b), Some(c), Some(d)) => {
                return Ok((QuarticFamily::new(a, b, c, d)?, Source::Flags))
            }
            (None, None, None, None) => {}
            _ => {
                return Err(Error::Parse(
                    "give all of --a --b --c --d, or --a --lambda0 --b".into(),
                ))
            }
        }
        let text = self.stdin()?.trim().to_string();
        if text.is_empty() {
            let (a, l0, b) = REFERENCE;
            return Ok((to_quartic(a, l0, b)?, Source::Reference));
        }
        Ok((parse_family_json(&text)?, Source::Stdin))
    }

    fn moduli_point(&mut self, f: &FamilyArgs) -> Result<(ModuliPoint, Source), Error> {
        if let Some(m) = &f.moduli {
            return Ok((ModuliPoint::new(m[0], m[1], m[2])?, Source::Moduli));
        }
        match (f.a, f.lambda0, f.b, f.c, f.d) {
            (Some(a), Some(l0), Some(b), None, None) => {
                return Ok((ModuliPoint::new(a, l0, b)?, Source::Flags))
            }
            (None, None, None, None, None) => {}
            _ => {
                return Err(Error::Parse(
                    "a moduli point needs --moduli A LAMBDA0 B or --a --lambda0 --b".into(),
                ))
            }
        }
        let text = self.stdin()?.trim().to_string();
        if text.is_empty() {
            let (a, l0, b) = REFERENCE;
            return Ok((ModuliPoint::new(a, l0, b)?, Source::Reference));
        }
        Ok((parse_moduli_json(&text)?, Source::Stdin))
    }

    fn plane(&self, fam: &QuarticFamily, spec: PlaneSpec) -> Result<(PlaneChart, [f64; 4]), Error> {
        let h = match spec {
            PlaneSpec::RandomSmooth => random_smooth_plane(fam, self.seed, &self.tol)?,
            PlaneSpec::RandomNodal => random_nodal_plane(fam, self.seed, &self.tol)?,
            PlaneSpec::Lambda(l) => [1.0, -l, 0.0, 0.0],
            PlaneSpec::Explicit(h) => h,
        };
        Ok((PlaneChart::real_frame(&h, None), h))
    }
}

#[derive(Debug, Clone, Serialize)]
struct CheckLine {
    name: &'static str,
    pass: bool,
    residual: Option<f64>,
    detail: String,
}

impl CheckLine {
    fn new(
        name: &'static str,
        pass: bool,
        residual: Option<f64>,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            name,
            pass,
            residual,
            detail: detail.into(),
        }
    }
}

/// What a subcommand produced before it is wrapped into a report.
struct Outcome {
    family: Option<(QuarticFamily, Source)>,
    result: Value,
    checks: Vec<CheckLine>,
    indeterminate: bool,
    csv: Option<(String, Option<PathBuf>)>,
}

impl Outcome {
    fn new(family: Option<(QuarticFamily, Source)>, result: Value) -> Self {
        Self {
            family,
            result,
            checks: Vec::new(),
            indeterminate: false,
            csv: None,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn descriptor(c: &ConicArgs) -> TouchingConicDescriptor {
    match c.kind {
        ConicKind::Generic => TouchingConicDescriptor::Generic {
            lambda: c.lambda,
            theta: c.theta,
        },
        ConicKind::Special => TouchingConicDescriptor::Special {
            lambda: c.lambda,
            theta: c.theta,
        },
        ConicKind::Orbit => TouchingConicDescriptor::Orbit {
            lambda: c.lambda,
            alpha: c.alpha,
        },
    }
}

fn check(ctx: &mut Ctx, f: &FamilyArgs) -> Result<Outcome, Error> {
    let (fam, src) = ctx.family(f)?;
    let rep = condition_a_check(&fam, &ctx.tol)?;
    let mut out = Outcome::new(
        Some((fam, src)),
        json!({ "holds": rep.holds(), "lambda0": rep.lambda0, "report": to_value(&rep) }),
    );
    match &rep.status {
        Status::Holds => out.checks.push(CheckLine::new(
            "condition-a",
            true,
            Some(rep.min_margin),
            "holds",
        )),
        Status::Fails(why) => out.checks.push(CheckLine::new(
            "condition-a",
            false,
            Some(rep.min_margin),
            why.clone(),
        )),
        Status::Indeterminate(why) => {
            out.indeterminate = true;
            out.checks.push(CheckLine::new(
                "condition-a",
                false,
                Some(rep.min_margin),
                why.clone(),
            ));
        }
    }
    Ok(out)
}

fn singularities(ctx: &mut Ctx, f: &FamilyArgs) -> Result<Outcome, Error> {
    let (fam, src) = ctx.family(f)?;
    let rep = classify_singularities(&fam, &ctx.tol)?;
    Ok(Outcome::new(
        Some((fam, src)),
        json!({ "count": rep.points.len(), "points": to_value(&rep.points) }),
    ))
}

fn section(ctx: &mut Ctx, f: &FamilyArgs, p: &PlaneArgs) -> Result<Outcome, Error> {
    let (fam, src) = ctx.family(f)?;
    let (chart, h) = ctx.plane(&fam, p.plane)?;
    let class = classify_plane(&fam, h, &ctx.tol)?.class;
    let form = plane_section(&fam, &chart);
    let terms: Vec<Value> = form
        .terms()
        .map(|(e, c)| json!({ "exponents": e, "coefficient": [c.re, c.im] }))
        .collect();
    Ok(Outcome::new(
        Some((fam, src)),
        json!({ "plane": h, "class": to_value(&class), "terms": terms }),
    ))
}

fn bitangents(
    ctx: &mut Ctx,
    f: &FamilyArgs,
    p: &PlaneArgs,
    steiner: bool,
) -> Result<Outcome, Error> {
    let (fam, src) = ctx.family(f)?;
    let (chart, h) = ctx.plane(&fam, p.plane)?;
    let class = classify_plane(&fam, h, &ctx.tol)?.class;
    let curve = PlaneQuarticCurve::from_section(&fam, &chart)?;
    let cat = find_bitangents(&curve, &ctx.tol)?;
    let real = curve
        .real_map
        .map(|m| real_bitangents(&cat, &m, &ctx.tol).len());
    let trivial = cat.lines.iter().filter(|b| b.trivial).count();
    let through_node = cat.lines.iter().filter(|b| b.through_node).count();
    let mut result = json!({
        "plane": h,
        "plane_class": to_value(&class),
        "curve_class": to_value(&cat.class),
        "count": cat.lines.len(),
        "expected": cat.class.expected_count(),
        "real": real,
        "trivial": trivial,
        "through_node": through_node,
        "lines": to_value(&cat.lines),
    });
    let mut out = Outcome::new(Some((fam, src)), Value::Null);
    out.checks.push(CheckLine::new(
        "count",
        cat.lines.len() == cat.class.expected_count(),
        None,
        format!("{} of {}", cat.lines.len(), cat.class.expected_count()),
    ));
    if steiner {
        let part = steiner_partition(&cat.lines, &ctx.tol)?;
        result["steiner_classes"] = to_value(&part.classes);
        out.checks.push(CheckLine::new(
            "steiner",
            true,
            None,
            format!("{} classes of 6", part.classes.len()),
        ));
    }
    out.result = result;
    Ok(out)
}

fn touching(ctx: &mut Ctx, f: &FamilyArgs, c: &ConicArgs) -> Result<Outcome, Error> {
    let (fam, src) = ctx.family(f)?;
    let desc = descriptor(c);
    let conic = desc.conic(&fam)?;
    let rep = verify_touching(&conic, &section_on_h_lambda(&fam, c.lambda), &ctx.tol)?;
    let det = conic.determinant();
    let mut out = Outcome::new(
        Some((fam, src)),
        json!({ "descriptor": to_value(&desc), "determinant": [det.re, det.im], "report": to_value(&rep) }),
    );
    out.checks.push(CheckLine::new(
        "touching",
        rep.touching,
        None,
        format!("{} intersection points", rep.points.len()),
    ));
    Ok(out)
}

fn split(ctx: &mut Ctx, f: &FamilyArgs, c: &ConicArgs) -> Result<Outcome, Error> {
    let (fam, src) = ctx.family(f)?;
    let sp = split_double_cover(&fam, &descriptor(c), &ctx.tol)?;
    let mut out = Outcome::new(Some((fam, src)), to_value(&sp));
    out.checks.push(CheckLine::new(
        "square-residual",
        sp.square_residual <= ctx.tol.square_residual,
        Some(sp.square_residual),
        "",
    ));
    Ok(out)
}

fn h_function(h: u8, res: Option<ResolutionChoice>) -> Result<HFunction, Error> {
    match (h, res) {
        (0, _) => Ok(HFunction::H0),
        (_, Some(r)) => HFunction::for_resolution(h, &r),
        (_, None) => Err(Error::Parse(format!("h{h} needs --res l1,l2,l3"))),
    }
}

fn hplot(
    ctx: &mut Ctx,
    f: &FamilyArgs,
    h: u8,
    res: Option<ResolutionChoice>,
    samples: usize,
    csv: Option<PathBuf>,
) -> Result<Outcome, Error> {
    let (fam, src) = ctx.family(f)?;
    let hf = h_function(h, res)?;
    let (rows, dropped) = sample_h(&fam, &hf, samples)?;
    let mut text = String::from("lambda,value,interval\n");
    for r in &rows {
        text.push_str(&format!("{},{},{:?}\n", r.lambda, r.value, r.interval));
    }
    let mut out = Outcome::new(
        Some((fam, src)),
        json!({ "h": to_value(&hf), "requested": samples, "rows": rows.len(), "guarded": dropped }),
    );
    out.csv = Some((text, csv));
    Ok(out)
}

fn resolve(ctx: &mut Ctx, f: &FamilyArgs, res: Option<ResolutionChoice>) -> Result<Outcome, Error> {
    let (fam, src) = ctx.family(f)?;
    let result = match res {
        None => {
            let adm = admissible_resolutions(&fam, &ctx.tol)?;
            let names: Vec<String> = adm.iter().map(|x| x.resolution.to_string()).collect();
            json!({ "count": adm.len(), "resolutions": names, "details": to_value(&adm) })
        }
        Some(r) => {
            let mut tables = Vec::new();
            for i in 1..=3 {
                tables.push(to_value(&behavior_table(
                    &fam,
                    &HFunction::for_resolution(i, &r)?,
                    &ctx.tol,
                )?));
            }
            let h0 = behavior_table(&fam, &HFunction::H0, &ctx.tol)?;
            json!({ "resolution": r.to_string(), "h0": to_value(&h0), "tables": tables })
        }
    };
    Ok(Outcome::new(Some((fam, src)), result))
}

fn moduli(ctx: &mut Ctx, f: &FamilyArgs) -> Result<Outcome, Error> {
    let (p, _) = ctx.moduli_point(f)?;
    let fam = p.family()?;
    let valid = p.is_valid(&ctx.tol)?;
    let image = involution_g(&p)?;
    let back = involution_g(&image)?;
    let round_trip = (back.lambda0 - p.lambda0).abs().max((back.b - p.b).abs());
    let fixed = fixed_lambda0(p.a);
    let threshold = b_threshold(p.a, p.lambda0, &ctx.tol)
        .map(|t| to_value(&t))
        .unwrap_or(Value::Null);
    let mut out = Outcome::new(
        Some((fam, Source::Moduli)),
        json!({
            "point": to_value(&p),
            "valid": valid,
            "image": to_value(&image),
            "fixed_lambda0": fixed,
            "on_fixed_locus": (p.lambda0 - fixed).abs() <= ctx.tol.general * (1.0 + fixed),
            "b_threshold": threshold,
        }),
    );
    out.checks.push(CheckLine::new(
        "involution",
        round_trip <= 1e-12 * (1.0 + p.lambda0.abs() + p.b.abs()),
        Some(round_trip),
        "G∘G",
    ));
    let mismatch = g_coefficient_mismatch(&fam)?;
    out.checks.push(CheckLine::new(
        "coefficients",
        mismatch <= 1e-9,
        Some(mismatch),
        "B under G",
    ));
    Ok(out)
}

fn verify_all(ctx: &mut Ctx, f: &FamilyArgs) -> Result<Outcome, Error> {
    let (fam, src) = ctx.family(f)?;
    let tol = ctx.tol;
    let mut checks = Vec::new();
    let mut indeterminate = false;

    let rep = condition_a_check(&fam, &tol)?;
    if matches!(rep.status, Status::Indeterminate(_)) {
        indeterminate = true;
    }
    checks.push(CheckLine::new(
        "condition-a",
        rep.holds(),
        Some(rep.min_margin),
        format!("{:?}", rep.status),
    ));

    let sing = classify_singularities(&fam, &tol)?;
    let e7 = sing
        .points
        .iter()
        .filter(|s| s.kind == SingularityKind::EllipticE7)
        .count();
    let odp: Vec<_> = sing.odps().collect();
    let odp_dist = match (rep.lambda0, odp.as_slice()) {
        (Some(l0), [one]) => Some(one.point.distance(&ProjPoint::real([l0, 1.0, 0.0, 0.0]))),
        _ => None,
    };
    checks.push(CheckLine::new(
        "singularities",
        e7 == 2 && sing.points.len() == 3 && odp_dist.is_some_and(|d| d <= 1e-6),
        odp_dist,
        format!("{e7} elliptic, {} double points", odp.len()),
    ));

    let adm = admissible_resolutions(&fam, &tol)?;
    let mut names: Vec<String> = adm.iter().map(|x| x.resolution.to_string()).collect();
    names.sort();
    names.dedup();
    let expected = ["x0-ax1,x0,x0+x1", "x1,x0+x1,x0"];
    checks.push(CheckLine::new(
        "resolutions",
        names == expected,
        None,
        names.join(" "),
    ));

    if let Some(l0) = rep.lambda0 {
        let p = ModuliPoint::new(fam.a, l0, fam.b)?;
        let back = involution_g(&involution_g(&p)?)?;
        let d = (back.lambda0 - p.lambda0).abs().max((back.b - p.b).abs());
        checks.push(CheckLine::new(
            "involution",
            d <= 1e-12 * (1.0 + l0.abs() + fam.b.abs()),
            Some(d),
            "G∘G = id",
        ));
    }
    let mismatch = g_coefficient_mismatch(&fam)?;
    checks.push(CheckLine::new(
        "involution-coefficients",
        mismatch <= 1e-9,
        Some(mismatch),
        "B under G",
    ));

    let h = random_smooth_plane(&fam, ctx.seed, &tol)?;
    let curve = PlaneQuarticCurve::from_section(&fam, &PlaneChart::real_frame(&h, None))?;
    match find_bitangents(&curve, &tol) {
        Ok(cat) => {
            let real = curve
                .real_map
                .map_or(0, |m| real_bitangents(&cat, &m, &tol).len());
            let trivial = cat.lines.iter().filter(|b| b.real && b.trivial).count();
            checks.push(CheckLine::new(
                "bitangents",
                cat.lines.len() == 28 && real == 4 && trivial == 4,
                None,
                format!(
                    "{} lines, {real} real, {trivial} real trivial",
                    cat.lines.len()
                ),
            ));
            let steiner = steiner_partition(&cat.lines, &tol);
            checks.push(CheckLine::new(
                "steiner",
                steiner.is_ok(),
                None,
                steiner.err().map(|e| e.to_string()).unwrap_or_default(),
            ));
        }
        Err(e) => checks.push(CheckLine::new("bitangents", false, None, e.to_string())),
    }

    let sixteen = enumerate_minus_one(
        &octagon_config(),
        &Constraints {
            must_contain: vec![0],
            must_exclude: vec![4],
            connected: true,
            multiplicity_bounds: None,
        },
    )
    .len();
    let cat = fifty_six_catalog();
    let pairs = real_pairs(&cat).len();
    checks.push(CheckLine::new(
        "lattice",
        sixteen == 16 && cat.classes.len() == 56 && pairs == 4,
        None,
        format!(
            "{sixteen} octagon classes, {} catalog classes, {pairs} real pairs",
            cat.classes.len()
        ),
    ));

    let passed = checks.iter().filter(|c| c.pass).count();
    let mut out = Outcome::new(
        Some((fam, src)),
        json!({ "passed": passed, "total": checks.len(), "plane": h }),
    );
    out.checks = checks;
    out.indeterminate = indeterminate;
    Ok(out)
}

fn dispatch(ctx: &mut Ctx, cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Check(f) => check(ctx, f),
        Command::FromModuli { a, lambda0, b } => {
            let fam = to_quartic(*a, *lambda0, *b)?;
            let point = ModuliPoint::new(*a, *lambda0, *b)?;
            Ok(Outcome::new(
                Some((fam, Source::Moduli)),
                json!({ "point": to_value(&point) }),
            ))
        }
        Command::Singularities(f) => singularities(ctx, f),
        Command::Section { family, plane } => section(ctx, family, plane),
        Command::Bitangents {
            family,
            plane,
            steiner,
        } => bitangents(ctx, family, plane, *steiner),
        Command::Touching { family, conic } => touching(ctx, family, conic),
        Command::Split { family, conic } => split(ctx, family, conic),
        Command::Hplot {
            family,
            h,
            res,
            samples,
            csv,
        } => hplot(ctx, family, *h, *res, *samples, csv.clone()),
        Command::Resolve { family, res } => resolve(ctx, family, *res),
        Command::Moduli(f) => moduli(ctx, f),
        Command::VerifyAll(f) => verify_all(ctx, f),
    }
}

fn report(
    argv: &[String],
    ctx: &Ctx,
    family: Option<(QuarticFamily, Source)>,
    status: &str,
    body: Value,
) -> Value {
    let mut doc = json!({
        "schema": SCHEMA,
        "command": argv.get(1..).unwrap_or_default(),
        "seed": ctx.seed,
        "tolerances": to_value(&ctx.tol),
        "status": status,
    });
    if let Some((fam, src)) = family {
        doc["family"] = to_value(&fam);
        doc["family_source"] = to_value(&src);
    }
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    doc
}

fn emit(text: &str, path: Option<&PathBuf>, stdout: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

/// Run one command line. `argv[0]` is the program name. Standard input is
/// read only when a command needs a family or moduli point and none is
/// given by flags. Returns the process exit code.
pub fn run(
    argv: &[String],
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut tol = Tolerances::from_env();
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            let _ = writeln!(stderr, "error: --tol must be positive and finite, got {t}");
            return EXIT_USAGE;
        }
        tol = tol.with_general(t);
    }
    let mut ctx = Ctx {
        tol,
        seed: cli.seed,
        stdin,
        stdin_text: None,
    };
    let (doc, code, csv) = match dispatch(&mut ctx, &cli.command) {
        Ok(o) => {
            let failed = o.checks.iter().any(|c| !c.pass);
            let (status, code) = if o.indeterminate {
                ("indeterminate", EXIT_INDETERMINATE)
            } else if failed {
                ("check-failed", EXIT_CHECK_FAILED)
            } else {
                ("ok", EXIT_OK)
            };
            let body = json!({ "result": o.result, "checks": to_value(&o.checks) });
            (report(argv, &ctx, o.family, status, body), code, o.csv)
        }
        Err(Error::Parse(msg)) | Err(Error::Precondition(msg)) => {
            let _ = writeln!(stderr, "error: {msg}\n\nRun with --help for usage.");
            return EXIT_USAGE;
        }
        Err(e @ (Error::Indeterminate(_) | Error::NoConvergence { .. })) => (
            report(
                argv,
                &ctx,
                None,
                "indeterminate",
                json!({ "error": e.to_string() }),
            ),
            EXIT_INDETERMINATE,
            None,
        ),
        Err(e @ Error::Verification(_)) => (
            report(
                argv,
                &ctx,
                None,
                "check-failed",
                json!({ "error": e.to_string() }),
            ),
            EXIT_CHECK_FAILED,
            None,
        ),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    let written = match csv {
        Some((rows, Some(path))) => {
            std::fs::write(&path, rows).and_then(|_| emit(&text, cli.out.as_ref(), stdout))
        }
        Some((rows, None)) => stdout.write_all(rows.as_bytes()).and_then(|_| {
            cli.out
                .as_ref()
                .map_or(Ok(()), |p| std::fs::write(p, &text))
        }),
        None => emit(&text, cli.out.as_ref(), stdout),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_CHECK_FAILED;
    }
    code
}
