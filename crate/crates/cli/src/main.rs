//! Command-line front end: computes resonance/eigenvalue spectra of
//! piecewise-constant potentials, certifies the closed-form bounds against
//! them, and emits plot-ready data files.
//!
//! Exit codes: 0 success, 2 parse/parameter error, 3 incomplete coverage,
//! 4 overflow inside an explicitly requested window, 5 failed certificate
//! (the report is still written).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use resonances::bounds::{
    carleson_box_check, counting_bound_certificate, egamma_witness, factorization_check,
    forbidden_domain_check, jensen_check, lt_sum_certificate, rouche_predicate, BoundCertificate,
};
use resonances::io::{parse_potential, sorted_for_export, spectrum_to_json};
use resonances::zeros::{counting_function, locate_zeros, Rect, SpectralKind, SpectrumWindow};
use resonances::{spectral_function, Error, OperatorCase, PiecewisePotential};

#[derive(Parser)]
#[command(name = "resonances", version, about = "Spectra of 1D Schrödinger operators with compactly supported potentials, with certified bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the spectrum in a window and write spectrum.json + wgrid.csv
    Spectrum(CommonArgs),
    /// Check the selected bound certificates against the computed spectrum
    Certify(CertifyArgs),
    /// Emit scatter.csv, staircase.csv and forbidden.csv plot data
    Plotdata(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Potential spec file (JSON: case, breakpoints, values)
    #[arg(long)]
    potential: PathBuf,
    /// Override the case from the potential file
    #[arg(long)]
    case: Option<String>,
    /// Window "u0,u1,v0,v1" (re_min,re_max,im_min,im_max) or "auto"
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    window: String,
    /// Zero-location tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Radii for counting-function outputs (comma separated)
    #[arg(long, default_value = "1,5,10")]
    radii: String,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Parallelism degree (accepted for compatibility; execution is
    /// single-threaded to keep outputs bit-stable)
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Certificates to check: comma-separated subset of
    /// counting,resonance-sum,forbidden-domain,rouche,jensen,egamma,
    /// carleson,factorization — or "all"
    #[arg(long, default_value = "all")]
    certify: String,
    /// Exponents for the resonance-sum bound (comma separated, all > 1)
    #[arg(long, default_value = "2")]
    p: String,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IncompleteCoverage => Failure::new(3, format!("{e}")),
            Error::Overflow { .. } => Failure::new(4, format!("{e}")),
            Error::InvalidPotential(_) | Error::InvalidParameter(_) => {
                Failure::new(2, format!("{e}"))
            }
            other => Failure::new(3, format!("{other}")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Spectrum(args) => cmd_spectrum(&args),
        Command::Certify(args) => cmd_certify(&args),
        Command::Plotdata(args) => cmd_plotdata(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn seed_from_env() -> Result<u64, Failure> {
    match std::env::var("RESONANCE_SEED") {
        Ok(v) => v
            .parse()
            .map_err(|_| Failure::new(2, format!("RESONANCE_SEED must be an integer, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn load_potential(args: &CommonArgs) -> Result<PiecewisePotential, Failure> {
    if args.jobs == 0 {
        return Err(Failure::new(2, "--jobs must be at least 1"));
    }
    let text = fs::read_to_string(&args.potential)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", args.potential.display())))?;
    let p = parse_potential(&text).map_err(|e| Failure::new(2, format!("{e}")))?;
    let p = match args.case.as_deref() {
        None => p,
        Some("line") => p.with_case(OperatorCase::Line).map_err(|e| Failure::new(2, format!("{e}")))?,
        Some("dirichlet") => p
            .with_case(OperatorCase::DirichletHalfLine)
            .map_err(|e| Failure::new(2, format!("{e}")))?,
        Some("neumann") => p
            .with_case(OperatorCase::NeumannHalfLine)
            .map_err(|e| Failure::new(2, format!("{e}")))?,
        Some(other) => {
            return Err(Failure::new(
                2,
                format!("unknown case {other:?}; expected line, dirichlet or neumann"),
            ))
        }
    };
    let (canon, _) = p.canonicalize();
    Ok(canon)
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::new(2, format!("invalid {what} entry {t:?}")))
        })
        .collect()
}

/// Auto window: real extent sized for roughly 50 zeros, imaginary depth
/// capped by the overflow limit, the top covering the eigenvalue region.
fn auto_window(p: &PiecewisePotential) -> Rect {
    let c = p.constants();
    let r = if c.gamma == 0.0 {
        5.0
    } else {
        25.0 * std::f64::consts::PI / c.gamma
    };
    let depth = if c.gamma == 0.0 { r } else { r.min(40.0 / c.gamma) };
    let top = (c.norm_l1 + 1.0).min(depth);
    Rect::new(-r, r, -depth, top.max(1.0)).expect("auto window")
}

fn parse_window(args: &CommonArgs, p: &PiecewisePotential) -> Result<(Rect, bool), Failure> {
    if args.window == "auto" {
        return Ok((auto_window(p), false));
    }
    let vals = parse_list(&args.window, "window")?;
    if vals.len() != 4 {
        return Err(Failure::new(
            2,
            "window must be \"u0,u1,v0,v1\" or \"auto\"",
        ));
    }
    let rect = Rect::new(vals[0], vals[1], vals[2], vals[3]).map_err(|e| Failure::new(2, format!("{e}")))?;
    Ok((rect, true))
}

fn compute_spectrum(
    p: &PiecewisePotential,
    rect: Rect,
    explicit: bool,
    tol: f64,
    seed: u64,
) -> Result<SpectrumWindow, Failure> {
    let f = spectral_function(p);
    let mut rect = rect;
    for shrink in 0..6 {
        match locate_zeros(&f, &rect, tol, seed) {
            Ok(w) => {
                if !w.complete {
                    return Err(Failure::new(3, "zero list does not account for the window count"));
                }
                return Ok(w);
            }
            Err(Error::Overflow { k }) => {
                if explicit {
                    return Err(Failure::new(4, format!("overflow at k = {k} inside the requested window")));
                }
                if shrink == 5 {
                    return Err(Failure::new(4, format!("overflow at k = {k} persists after shrinking")));
                }
                rect = Rect::new(rect.re_min, rect.re_max, 0.5 * rect.im_min, rect.im_max)
                    .map_err(|e| Failure::new(4, format!("{e}")))?;
                eprintln!("note: window depth halved to {} after overflow", rect.im_min);
            }
            Err(e) => return Err(e.into()),
        }
    }
    unreachable!()
}

fn write_out(dir: &PathBuf, name: &str, contents: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir)
        .map_err(|e| Failure::new(2, format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display())))
}

fn cmd_spectrum(args: &CommonArgs) -> Result<(), Failure> {
    let p = load_potential(args)?;
    let seed = seed_from_env()?;
    let (rect, explicit) = parse_window(args, &p)?;
    let w = compute_spectrum(&p, rect, explicit, args.tol, seed)?;
    write_out(&args.out, "spectrum.json", &spectrum_to_json(&w))?;

    // coarse |F| heat map over the window for plotting
    let f = spectral_function(&p);
    let mut grid = String::from("k_re,k_im,abs_f\n");
    let (nx, ny) = (81, 41);
    for j in 0..ny {
        for i in 0..nx {
            let k = Complex64::new(
                w.rect.re_min + (w.rect.re_max - w.rect.re_min) * i as f64 / (nx - 1) as f64,
                w.rect.im_min + (w.rect.im_max - w.rect.im_min) * j as f64 / (ny - 1) as f64,
            );
            let v = match f(k) {
                Ok((v, _)) => v.norm(),
                Err(_) => f64::INFINITY,
            };
            grid.push_str(&format!("{},{},{}\n", k.re, k.im, v));
        }
    }
    write_out(&args.out, "wgrid.csv", &grid)?;
    Ok(())
}

fn certificate_table(certs: &[BoundCertificate]) -> String {
    let mut t = format!(
        "{:<24} {:>18} {:>18} {:>18} {:>6}\n",
        "id", "lhs", "rhs", "margin", "pass"
    );
    for c in certs {
        t.push_str(&format!(
            "{:<24} {:>18.10e} {:>18.10e} {:>18.10e} {:>6}\n",
            c.id, c.lhs, c.rhs, c.margin, c.pass
        ));
    }
    t
}

fn sibling_case(case: OperatorCase) -> OperatorCase {
    match case {
        OperatorCase::DirichletHalfLine => OperatorCase::NeumannHalfLine,
        OperatorCase::NeumannHalfLine => OperatorCase::DirichletHalfLine,
        OperatorCase::Line => OperatorCase::Line,
    }
}

fn cmd_certify(args: &CertifyArgs) -> Result<(), Failure> {
    let common = &args.common;
    let p = load_potential(common)?;
    let seed = seed_from_env()?;
    let consts = p.constants();
    let case = p.case();

    let selected: Vec<&str> = if args.certify == "all" {
        vec![
            "counting",
            "resonance-sum",
            "forbidden-domain",
            "rouche",
            "jensen",
            "egamma",
            "carleson",
            "factorization",
        ]
    } else {
        args.certify.split(',').map(|s| s.trim()).collect()
    };
    let known = [
        "counting",
        "resonance-sum",
        "forbidden-domain",
        "rouche",
        "jensen",
        "egamma",
        "carleson",
        "factorization",
    ];
    for s in &selected {
        if !known.contains(s) {
            return Err(Failure::new(2, format!("unknown certificate {s:?}")));
        }
    }
    let ps = parse_list(&args.p, "p")?;
    if let Some(bad) = ps.iter().find(|&&v| v <= 1.0) {
        return Err(Failure::new(2, format!("p must exceed 1, got {bad}")));
    }
    let radii = parse_list(&common.radii, "radii")?;
    if let Some(bad) = radii.iter().find(|&&r| r <= 0.0) {
        return Err(Failure::new(2, format!("radii must be positive, got {bad}")));
    }

    let (rect, explicit) = parse_window(common, &p)?;
    let w = compute_spectrum(&p, rect, explicit, common.tol, seed)?;
    let sibling = if case.is_half_line() && selected.contains(&"counting") {
        let sib = p.with_case(sibling_case(case)).map_err(|e| Failure::new(2, format!("{e}")))?;
        Some(compute_spectrum(&sib, w.rect, true, common.tol, seed)?)
    } else {
        None
    };

    let coverage = {
        let horiz = w.rect.re_min.abs().min(w.rect.re_max.abs());
        horiz.min(w.rect.im_min.abs()).min(w.rect.im_max.abs())
    };

    let mut certs: Vec<BoundCertificate> = Vec::new();

    if selected.contains(&"counting") {
        for &r in &radii {
            if r > coverage {
                continue;
            }
            let lhs = match &sibling {
                None => counting_function(&w, r)? as f64,
                Some(sib) => {
                    (counting_function(&w, r)? as f64 + counting_function(sib, r)? as f64) / 2.0
                }
            };
            certs.push(counting_bound_certificate(case, &consts, r, lhs));
        }
    }

    if selected.contains(&"resonance-sum") {
        for &pv in &ps {
            certs.push(lt_sum_certificate(&w, pv, &consts, case)?);
        }
    }

    if selected.contains(&"forbidden-domain") && case == OperatorCase::DirichletHalfLine {
        if (consts.gamma - 1.0).abs() < 1e-12 {
            certs.extend(forbidden_domain_check(&w, consts.norm_l1));
        } else if consts.gamma > 0.0 {
            // exact rescaling to unit support; the spectrum scales by gamma
            let hat = p.rescale_to_unit_support().map_err(Failure::from)?;
            let g = consts.gamma;
            let hat_rect = Rect::new(
                g * w.rect.re_min,
                g * w.rect.re_max,
                g * w.rect.im_min,
                g * w.rect.im_max,
            )
            .map_err(Failure::from)?;
            let w_hat = compute_spectrum(&hat, hat_rect, true, common.tol, seed)?;
            certs.extend(forbidden_domain_check(&w_hat, hat.constants().norm_l1));
        }
    }

    if selected.contains(&"rouche") {
        for &r in &radii {
            if r > coverage {
                continue;
            }
            let (holds, mut cert) = rouche_predicate(&consts, r);
            if !holds {
                continue; // no conclusion, nothing to certify
            }
            let count = counting_function(&w, r)?;
            cert.id = "rouche-localization".into();
            cert.lhs = count as f64;
            cert.rhs = 1.0;
            cert.margin = 1.0 - count as f64;
            cert.pass = count == 1
                && w
                    .points
                    .iter()
                    .filter(|z| z.k.norm() <= r)
                    .all(|z| z.multiplicity == 1);
            cert.notes = "smallness criterion holds; exactly one simple zero expected".into();
            certs.push(cert);
        }
    }

    if selected.contains(&"jensen") {
        let f = spectral_function(&p);
        let r = 0.45 * coverage.max(2.0).min(8.0);
        // center chosen away from axes where zeros accumulate
        let mut center = Complex64::new(0.318, -0.177);
        for _ in 0..8 {
            let clear = w.points.iter().all(|z| {
                (z.k - center).norm() > 1e-3 && ((z.k - center).norm() - r).abs() > 1e-4
            });
            if clear {
                break;
            }
            center += Complex64::new(0.071, -0.043);
        }
        let inside: Vec<_> = w
            .points
            .iter()
            .filter(|z| (z.k - center).norm() < r)
            .copied()
            .collect();
        let covered = w.rect.contains_disk(center, r);
        if covered {
            let residual = jensen_check(&f, center, r, &inside)?;
            let mut inputs = std::collections::BTreeMap::new();
            inputs.insert("center_re".into(), center.re);
            inputs.insert("center_im".into(), center.im);
            inputs.insert("r".into(), r);
            certs.push(BoundCertificate::new(
                "jensen",
                residual,
                1e-6,
                case.as_str(),
                inputs,
                "absolute residual of the Jensen identity",
            ));
        }
    }

    if selected.contains(&"egamma") && case == OperatorCase::Line {
        let grid_rect = Rect::new(
            w.rect.re_min.max(-20.0),
            w.rect.re_max.min(20.0),
            w.rect.im_min.max(-5.0),
            w.rect.im_max.min(5.0),
        )
        .map_err(Failure::from)?;
        let witness = egamma_witness(&p, 1000, 1e3, &grid_rect, 41, 21)?;
        let mut inputs = std::collections::BTreeMap::new();
        inputs.insert("d1_argmin".into(), witness.d1_argmin);
        certs.push(BoundCertificate::new(
            "egamma-d1",
            1.0,
            witness.d1_min_ratio,
            case.as_str(),
            inputs.clone(),
            "|w(k)| / 2|k| >= 1 on the real grid",
        ));
        inputs.remove("d1_argmin");
        inputs.insert("d2_argmax_re".into(), witness.d2_argmax.re);
        inputs.insert("d2_argmax_im".into(), witness.d2_argmax.im);
        certs.push(BoundCertificate::new(
            "egamma-d2",
            witness.d2_max_ratio,
            1.0,
            case.as_str(),
            inputs,
            "|w_*| against its exponential envelope on the complex grid",
        ));
    }

    if selected.contains(&"carleson") && case == OperatorCase::Line && w.rect.im_max >= 0.0 {
        for &r in &radii {
            if r <= 1.0 {
                continue;
            }
            let half_width = (r * r - 1.0).sqrt();
            let t_max = (w.rect.re_max - half_width).floor();
            if 1.0 - r < w.rect.im_min || t_max < 0.0 {
                continue;
            }
            let mut t = -t_max;
            while t <= t_max {
                certs.push(carleson_box_check(&w, t, r, consts.gamma, consts.q0, consts.q_const)?);
                t += t_max.max(1.0);
            }
        }
    }

    if selected.contains(&"factorization") && case.is_half_line() {
        let grid = Rect::new(-10.0, 10.0, -3.0, 0.0).map_err(Failure::from)?;
        let resid = factorization_check(&p, &grid, 15, 7)?;
        certs.push(BoundCertificate::new(
            "factorization",
            resid,
            1e-10,
            case.as_str(),
            std::collections::BTreeMap::new(),
            "max relative residual of the even-extension identity on the grid",
        ));
    }

    let json = serde_json::to_string_pretty(&certs).expect("serializable");
    write_out(&common.out, "certificates.json", &json)?;
    write_out(&common.out, "certificates.txt", &certificate_table(&certs))?;

    if certs.iter().any(|c| !c.pass) {
        return Err(Failure::new(5, "one or more certificates failed; report written"));
    }
    Ok(())
}

fn cmd_plotdata(args: &CommonArgs) -> Result<(), Failure> {
    let p = load_potential(args)?;
    let seed = seed_from_env()?;
    let consts = p.constants();
    let (rect, explicit) = parse_window(args, &p)?;
    let w = compute_spectrum(&p, rect, explicit, args.tol, seed)?;

    let mut scatter = String::from("k_re,k_im,kind\n");
    for z in sorted_for_export(&w.points) {
        let kind = match z.kind {
            SpectralKind::Eigenvalue => "eigenvalue",
            SpectralKind::Resonance => "resonance",
            SpectralKind::RealResonance => "real_resonance",
            SpectralKind::Antibound => "antibound",
        };
        scatter.push_str(&format!("{},{},{}\n", z.k.re, z.k.im, kind));
    }
    write_out(&args.out, "scatter.csv", &scatter)?;

    let coverage = {
        let horiz = w.rect.re_min.abs().min(w.rect.re_max.abs());
        horiz.min(w.rect.im_min.abs()).min(w.rect.im_max.abs())
    };
    let mut staircase = String::from("r,count,bound_rhs\n");
    let mut r = 0.5;
    while r <= coverage {
        let n = counting_function(&w, r)?;
        let rhs = resonances::bounds::counting_bound_rhs(p.case(), &consts, r);
        staircase.push_str(&format!("{},{},{}\n", r, n, rhs));
        r += 0.5;
    }
    write_out(&args.out, "staircase.csv", &staircase)?;

    // forbidden-domain data for the Dirichlet problem, in unit-support
    // coordinates (exact rescaling when gamma != 1)
    let mut forbidden = String::from("abs_k,abs_im_k,lhs,rhs\n");
    if p.case() == OperatorCase::DirichletHalfLine && consts.gamma > 0.0 {
        let (w_unit, norm) = if (consts.gamma - 1.0).abs() < 1e-12 {
            (w.clone(), consts.norm_l1)
        } else {
            let hat = p.rescale_to_unit_support().map_err(Failure::from)?;
            let g = consts.gamma;
            let hat_rect = Rect::new(
                g * w.rect.re_min,
                g * w.rect.re_max,
                g * w.rect.im_min,
                g * w.rect.im_max,
            )
            .map_err(Failure::from)?;
            (
                compute_spectrum(&hat, hat_rect, true, args.tol, seed)?,
                hat.constants().norm_l1,
            )
        };
        let rhs = norm * norm.exp();
        for z in sorted_for_export(&w_unit.points) {
            if z.k.im > 0.0 {
                continue;
            }
            let lhs = z.k.norm() * (-2.0 * z.k.im.abs()).exp();
            forbidden.push_str(&format!("{},{},{},{}\n", z.k.norm(), z.k.im.abs(), lhs, rhs));
        }
    }
    write_out(&args.out, "forbidden.csv", &forbidden)?;
    Ok(())
}
