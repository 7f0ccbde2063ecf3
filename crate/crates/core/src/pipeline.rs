//! Verification pipelines behind the command-line subcommands.

use std::time::Instant;

use serde_json::json;

use crate::cohomology::{thm31_cochain_report, truncated_betti};
use crate::connection::{
    cyclic_dpi, levi_civita, metric_defect, riemann_poisson_witness, torsion_defect, ChristoffelTable,
};
use crate::error::{Error, Result};
use crate::foliation::{
    basic_form_family, bundle_like_check, characterize_kernel_form, connection_properties, h_invariance_residuals,
    leaf_connection, leafwise_d, leafwise_symplectic, parallel_omega_residuals, split_cotangent, FoliationSplit,
};
use crate::input::{FoliationSpecFile, Manifold, ManifoldSpec};
use crate::reconstruction::{build_structure, certify, validate_input};
use crate::report::{Check, Report, Witness};
use crate::symbolic::{Chart, ScalarField};
use crate::tensor::{describe_leafwise, OneForm, VectorField};

/// Degree bound for enumerated Casimir and basic-form families.
const FAMILY_DEGREE: u32 = 2;

fn d_name(chart: &Chart, i: usize) -> String {
    format!("d{}", chart.name(i))
}

/// Shared intermediate results of the check pipeline.
struct Stages {
    connection: Option<ChristoffelTable>,
    split: Option<FoliationSplit>,
    riemann_poisson: bool,
}

fn cometric_check(m: &Manifold) -> Check {
    match m.metric.validate(&m.samples) {
        Ok(()) => Check::pass("cometric", format!("positive definite at {} samples", m.samples.len())),
        Err(Error::NotPositiveDefiniteAt(p)) => {
            let det = m.metric.matrix().determinant().unwrap_or_else(|_| ScalarField::zero(m.pi.dim()));
            let w = Witness::locate("det(cometric)", &det, m.chart(), &m.samples);
            Check::fail("cometric", format!("not positive definite at {p}"), Some(w))
        }
        Err(e) => Check::error("cometric", e.to_string()),
    }
}

fn poisson_check(m: &Manifold) -> Check {
    let chart = m.chart();
    match m.pi.jacobi_witness() {
        None => Check::pass("poisson", "jacobiator vanishes"),
        Some(w) => {
            let (i, j, k) = w.indices;
            let label = format!("Jac({},{},{})", chart.name(i), chart.name(j), chart.name(k));
            Check::fail("poisson", "jacobi identity fails", Some(Witness::locate(label, &w.value, chart, &m.samples)))
        }
    }
}

fn casimir_check(m: &Manifold) -> Check {
    let basis = m.pi.casimir_basis(FAMILY_DEGREE);
    let shown: Vec<String> = basis.iter().map(|c| c.display(m.chart()).to_string()).collect();
    Check::pass("casimirs", format!("degree <= {FAMILY_DEGREE}: {}", shown.join(", ")))
}

fn rank_check(m: &Manifold) -> (Check, Option<FoliationSplit>) {
    match split_cotangent(&m.pi, &m.metric, m.declared_rank, &m.samples) {
        Ok(s) => (Check::pass("rank", format!("constant rank {}", s.rank)), Some(s)),
        Err(e) => (Check::error("rank", e.to_string()), None),
    }
}

fn torsion_check(m: &Manifold, d: &ChristoffelTable) -> Result<Check> {
    let n = m.pi.dim();
    let chart = m.chart();
    let e = |i| OneForm::coordinate(n, i);
    for i in 0..n {
        for j in i + 1..n {
            let t = torsion_defect(d, &m.pi, &e(i), &e(j))?;
            if let Some(k) = (0..n).find(|&k| !t.component(k).is_zero()) {
                let label = format!("T({},{})[{}]", d_name(chart, i), d_name(chart, j), d_name(chart, k));
                let w = Witness::locate(label, t.component(k), chart, &m.samples);
                return Ok(Check::fail("torsion_free", "torsion does not vanish", Some(w)));
            }
        }
    }
    Ok(Check::pass("torsion_free", "coordinate pairs"))
}

fn metric_check(m: &Manifold, d: &ChristoffelTable) -> Check {
    let n = m.pi.dim();
    let chart = m.chart();
    let e = |i| OneForm::coordinate(n, i);
    for i in 0..n {
        for j in 0..n {
            for k in j..n {
                let v = metric_defect(d, &m.metric, &m.pi, &e(i), &e(j), &e(k));
                if !v.is_zero() {
                    let label = format!("M({},{},{})", d_name(chart, i), d_name(chart, j), d_name(chart, k));
                    let w = Witness::locate(label, &v, chart, &m.samples);
                    return Check::fail("metric_compatible", "metric is not parallel", Some(w));
                }
            }
        }
    }
    Check::pass("metric_compatible", "coordinate triples")
}

fn homomorphism_check(m: &Manifold, poisson: bool) -> Result<Check> {
    if !poisson {
        return Ok(Check::skip("bracket_homomorphism", "requires a Poisson bivector"));
    }
    let n = m.pi.dim();
    let chart = m.chart();
    for i in 0..n {
        for j in i + 1..n {
            let v = m.pi.homomorphism_defect(&OneForm::coordinate(n, i), &OneForm::coordinate(n, j))?;
            if let Some(k) = (0..n).find(|&k| !v.component(k).is_zero()) {
                let label = format!("H({},{})[{}]", d_name(chart, i), d_name(chart, j), k);
                let w = Witness::locate(label, v.component(k), chart, &m.samples);
                return Ok(Check::fail("bracket_homomorphism", "sharp map is not a bracket homomorphism", Some(w)));
            }
        }
    }
    Ok(Check::pass("bracket_homomorphism", "coordinate pairs"))
}

fn riemann_poisson_check(m: &Manifold, d: &ChristoffelTable, poisson: bool) -> Check {
    let chart = m.chart();
    match riemann_poisson_witness(d, &m.pi) {
        Some(w) => {
            let (i, j, k) = w.indices;
            let label = format!("Dpi({},{},{})", d_name(chart, i), d_name(chart, j), d_name(chart, k));
            Check::fail(
                "riemann_poisson",
                "bivector is not parallel",
                Some(Witness::locate(label, &w.value, chart, &m.samples)),
            )
        }
        None if poisson => Check::pass("riemann_poisson", "D pi = 0"),
        None => Check::fail("riemann_poisson", "D pi = 0 but the bivector is not Poisson", poisson_check(m).witness),
    }
}

/// Cyclic sum of `D pi` equals `-2` times the jacobiator of the coordinates.
fn cyclic_check(m: &Manifold, d: &ChristoffelTable) -> Check {
    let n = m.pi.dim();
    let chart = m.chart();
    let e = |i| OneForm::coordinate(n, i);
    let x = |i| ScalarField::var(n, i);
    for t in crate::tensor::subsets(n, 3) {
        let lhs = cyclic_dpi(d, &m.pi, &e(t[0]), &e(t[1]), &e(t[2]));
        let rhs =
            m.pi.jacobiator(&x(t[0]), &x(t[1]), &x(t[2])).scale(&crate::symbolic::Rational::from_integer((-2).into()));
        let diff = &lhs - &rhs;
        if !diff.is_zero() {
            let label = format!("cyclic({},{},{}) + 2 Jac", chart.name(t[0]), chart.name(t[1]), chart.name(t[2]));
            return Check::fail(
                "cyclic_identity",
                "cyclic sum is not -2 times the jacobiator",
                Some(Witness::locate(label, &diff, chart, &m.samples)),
            );
        }
    }
    Check::pass("cyclic_identity", "cyclic D pi = -2 jacobiator")
}

fn foliation_checks(m: &Manifold, d: &ChristoffelTable, split: &FoliationSplit) -> Result<Vec<Check>> {
    let chart = m.chart();
    let pi = &m.pi;
    let g = &m.metric;
    let mut out = Vec::new();
    let omega = match leafwise_symplectic(pi, split, &m.samples) {
        Ok(o) => o,
        Err(e) => {
            out.push(Check::error("leafwise_symplectic", e.to_string()));
            return Ok(out);
        }
    };
    let d_omega = leafwise_d(split, &omega)?;
    match d_omega.iter().find(|(_, c)| !c.is_zero()) {
        None => out.push(Check::pass("leafwise_symplectic", format!("omega = {}", describe_leafwise(&omega, chart)))),
        Some((idx, c)) => {
            let label = format!("d_F omega{idx:?}");
            out.push(Check::fail(
                "leafwise_symplectic",
                "leafwise form is not closed",
                Some(Witness::locate(label, c, chart, &m.samples)),
            ));
        }
    }

    let nabla = leaf_connection(d, pi, split)?;
    match parallel_omega_residuals(split, &nabla, &omega).into_iter().find(|(_, v)| !v.is_zero()) {
        None => out.push(Check::pass("leaf_connection_parallel", "leafwise form is parallel")),
        Some(((a, b, c), v)) => {
            let label = format!("(nabla_{a} omega)({b},{c})");
            out.push(Check::fail(
                "leaf_connection_parallel",
                "leafwise form is not parallel",
                Some(Witness::locate(label, &v, chart, &m.samples)),
            ));
        }
    }

    let props = connection_properties(pi, g, d, split)?;
    if props.all_pass() {
        out.push(Check::pass("connection_properties", "kernel preserved, kernel directions flat, perp closed"));
    } else {
        let msg = [props.kernel_preserved, props.kernel_directions_flat, props.perp_closed]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>();
        out.push(Check::error("connection_properties", msg.join("; ")));
    }

    match h_invariance_residuals(pi, split).into_iter().next() {
        None => out.push(Check::pass("h_invariance", "L_h pi vanishes on perp forms")),
        Some(((k, a, b), v)) => {
            let label = format!("(L_h[{k}] pi)(perp[{a}],perp[{b}])");
            out.push(Check::fail(
                "h_invariance",
                "bivector not invariant along the complement",
                Some(Witness::locate(label, &v, chart, &m.samples)),
            ));
        }
    }

    let family = basic_form_family(pi, split, FAMILY_DEGREE)?;
    let n = pi.dim();
    let mut probes = family.clone();
    for k in &split.kernel_frame {
        for i in 0..n {
            probes.push(k.scale_by(&ScalarField::var(n, i)));
        }
    }
    let mut disagreement = None;
    for a in &probes {
        if !characterize_kernel_form(pi, g, d, split, a)?.all_agree() {
            disagreement = Some(a.display(chart));
            break;
        }
    }
    match disagreement {
        None => out.push(Check::pass(
            "basic_forms",
            format!("{} basic, predicates agree on {} kernel forms", family.len(), probes.len()),
        )),
        Some(a) => out.push(Check::error("basic_forms", format!("characterizations disagree on {a}"))),
    }

    let bl = bundle_like_check(pi, g, split, FAMILY_DEGREE)?;
    match bl.failures.first() {
        None => out.push(Check::pass("bundle_like", format!("{} basic forms", bl.family_size))),
        Some((i, j, v)) => {
            let label = format!("L_ts <basic[{i}],basic[{j}]>");
            let gv = split.ts_frame.iter().map(|t| t.apply(v)).find(|x| !x.is_zero()).unwrap_or_else(|| v.clone());
            out.push(Check::fail(
                "bundle_like",
                "inner product of basic forms is not Casimir",
                Some(Witness::locate(label, &gv, chart, &m.samples)),
            ));
        }
    }
    Ok(out)
}

fn run_stages(m: &Manifold, checks: &mut Vec<Check>) -> Result<Stages> {
    let cometric = cometric_check(m);
    let cometric_ok = cometric.verdict == crate::report::Verdict::Pass;
    checks.push(cometric);
    let pc = poisson_check(m);
    let poisson = pc.verdict == crate::report::Verdict::Pass;
    checks.push(pc);
    checks.push(casimir_check(m));
    let (rc, split) = rank_check(m);
    checks.push(rc);
    let mut stages = Stages { connection: None, split, riemann_poisson: false };
    if !cometric_ok {
        for name in [
            "levi_civita",
            "torsion_free",
            "metric_compatible",
            "bracket_homomorphism",
            "riemann_poisson",
            "cyclic_identity",
        ] {
            checks.push(Check::skip(name, "cometric check failed"));
        }
        return Ok(stages);
    }
    let d = match levi_civita(&m.pi, &m.metric) {
        Ok(d) => d,
        Err(e) => {
            checks.push(Check::error("levi_civita", e.to_string()));
            return Ok(stages);
        }
    };
    checks.push(Check::pass("levi_civita", format!("{} nonzero symbols", d.nonzero_entries().len())));
    checks.push(torsion_check(m, &d)?);
    checks.push(metric_check(m, &d));
    checks.push(homomorphism_check(m, poisson)?);
    let rp = riemann_poisson_check(m, &d, poisson);
    stages.riemann_poisson = rp.verdict == crate::report::Verdict::Pass;
    checks.push(rp);
    checks.push(cyclic_check(m, &d));
    stages.connection = Some(d);
    Ok(stages)
}

const FOLIATION_CHECKS: [&str; 6] = [
    "leafwise_symplectic",
    "leaf_connection_parallel",
    "connection_properties",
    "h_invariance",
    "basic_forms",
    "bundle_like",
];

fn push_foliation(m: &Manifold, stages: &Stages, checks: &mut Vec<Check>) -> Result<()> {
    let reason = match (&stages.split, &stages.connection, stages.riemann_poisson) {
        (None, _, _) => "rank check did not pass",
        (_, None, _) => "no connection",
        (_, _, false) => "requires a Riemann-Poisson structure",
        (Some(split), Some(d), true) => {
            checks.extend(foliation_checks(m, d, split)?);
            return Ok(());
        }
    };
    for name in FOLIATION_CHECKS {
        checks.push(Check::skip(name, reason));
    }
    Ok(())
}

fn finish(mut report: Report, start: Instant) -> Report {
    report.timing_ms = start.elapsed().as_millis() as u64;
    report
}

/// Full verification of a manifold spec.
pub fn check(m: &Manifold, input: &str, source: &[u8]) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new("check", input, source);
    let stages = run_stages(m, &mut report.checks)?;
    push_foliation(m, &stages, &mut report.checks)?;
    Ok(finish(report, start))
}

/// Every Christoffel symbol `D_{dx^i} dx^j = sum_k Gamma[i][j][k] dx^k`.
pub fn christoffel(m: &Manifold, input: &str, source: &[u8]) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new("christoffel", input, source);
    let d = levi_civita(&m.pi, &m.metric)?;
    let n = m.pi.dim();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let expr = d.get(i, j, k).display(m.chart()).to_string();
                report.text.push(format!("Gamma[{i}][{j}][{k}] = {expr}"));
                entries.push(json!({ "i": i, "j": j, "k": k, "expr": expr }));
            }
        }
    }
    report.push(Check::pass("levi_civita", format!("{} nonzero symbols", d.nonzero_entries().len())));
    report.data = Some(json!({ "christoffel": entries }));
    Ok(finish(report, start))
}

fn frame_lines(label: &str, frame: &[VectorField], chart: &Chart) -> Vec<String> {
    frame.iter().enumerate().map(|(i, v)| format!("{label}[{i}] = {}", v.display(chart))).collect()
}

fn form_lines(label: &str, frame: &[OneForm], chart: &Chart) -> Vec<String> {
    frame.iter().enumerate().map(|(i, v)| format!("{label}[{i}] = {}", v.display(chart))).collect()
}

/// Frames, leafwise symplectic form and invariance report.
pub fn foliation(m: &Manifold, input: &str, source: &[u8]) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new("foliation", input, source);
    let chart = m.chart();
    let (rc, split) = rank_check(m);
    report.push(rc);
    let Some(split) = split else {
        for name in FOLIATION_CHECKS {
            report.push(Check::skip(name, "rank check did not pass"));
        }
        return Ok(finish(report, start));
    };
    let mut text = Vec::new();
    text.extend(form_lines("kernel", &split.kernel_frame, chart));
    text.extend(form_lines("perp", &split.perp_frame, chart));
    text.extend(frame_lines("ts", &split.ts_frame, chart));
    text.extend(frame_lines("h", &split.h_frame, chart));
    report.text = text.clone();
    let d = levi_civita(&m.pi, &m.metric)?;
    let rp = riemann_poisson_check(m, &d, m.pi.is_poisson());
    let is_rp = rp.verdict == crate::report::Verdict::Pass;
    report.push(rp);
    if is_rp {
        report.checks.extend(foliation_checks(m, &d, &split)?);
    } else {
        for name in FOLIATION_CHECKS {
            report.push(Check::skip(name, "requires a Riemann-Poisson structure"));
        }
    }
    report.data = Some(json!({ "rank": split.rank, "frames": text }));
    Ok(finish(report, start))
}

/// Truncated Betti number of degree `p` in the window `degree`, optionally
/// with the cochain-level comparison against basic and leafwise cohomology.
pub fn cohomology(m: &Manifold, input: &str, source: &[u8], p: usize, degree: u32, thm31: bool) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new("cohomology", input, source);
    let b = truncated_betti(&m.pi, p, degree)?;
    report.push(Check::pass("betti", format!("b{p}(window d={degree}) = {}", b.betti)));
    report.text.push(format!("b{p}(window d={degree}) = {}", b.betti));
    report.text.push(format!(
        "  cocycles {}, coboundaries {} (preimage window {})",
        b.cocycles,
        b.coboundaries,
        b.preimage_window.map_or("none".to_string(), |w| format!("d={w}"))
    ));
    let mut data = json!({ "truncated": true, "betti": b });
    if thm31 {
        let split = split_cotangent(&m.pi, &m.metric, m.declared_rank, &m.samples)?;
        let rep = thm31_cochain_report(&m.pi, &m.metric, &split, p, degree)?;
        let closed_ok = rep.basic_failures.is_empty() && rep.leafwise_failures.is_empty();
        if closed_ok {
            report.push(Check::pass(
                "thm31_closedness",
                format!("{} basic and {} leafwise-closed forms map to cocycles", rep.basic_family, rep.leafwise_closed),
            ));
        } else {
            let first = rep.basic_failures.iter().chain(&rep.leafwise_failures).next().cloned().unwrap_or_default();
            report.push(Check::error("thm31_closedness", format!("image of {first} is not closed")));
        }
        let show = |b: Option<usize>| b.map_or("n/a".to_string(), |v| v.to_string());
        let detail = format!(
            "poisson {}, basic {}, leafwise {}",
            show(rep.poisson_betti),
            rep.basic_dimension,
            show(rep.leafwise_betti)
        );
        report.push(match rep.dimensions_agree {
            Some(true) => Check::pass("thm31_dimensions", detail),
            Some(false) => {
                Check::skip("thm31_dimensions", format!("flagged: dimensions differ in this window; {detail}"))
            }
            None => Check::skip("thm31_dimensions", format!("not comparable; {detail}")),
        });
        data["thm31"] = serde_json::to_value(&rep).expect("report serializes");
    }
    report.data = Some(data);
    Ok(finish(report, start))
}

/// Check pipeline plus the Christoffel table and low-degree Betti numbers.
pub fn full_report(m: &Manifold, input: &str, source: &[u8]) -> Result<Report> {
    let start = Instant::now();
    let mut report = check(m, input, source)?;
    report.command = "report".into();
    let chr = christoffel(m, input, source).ok().and_then(|r| r.data);
    let mut data = json!({ "christoffel": chr.map(|c| c["christoffel"].clone()) });
    if m.pi.polynomial_degree().is_some() && m.pi.is_poisson() {
        let betti: Vec<_> =
            (0..=m.pi.dim()).map(|p| truncated_betti(&m.pi, p, FAMILY_DEGREE)).collect::<Result<_>>()?;
        data["betti"] = serde_json::to_value(betti).expect("serializes");
    }
    report.data = Some(data);
    Ok(finish(report, start))
}

/// Builds the structure of a foliation spec and certifies it.
pub fn construct(spec: &FoliationSpecFile) -> Result<ManifoldSpec> {
    let input = spec.build()?;
    validate_input(&input)?;
    let (pi, g) = build_structure(&input)?;
    certify(&pi, &g, &input)?;
    Ok(ManifoldSpec::from_structure(&format!("{}_constructed", spec.name), &pi, &g, input.frame.len(), &input.samples))
}
