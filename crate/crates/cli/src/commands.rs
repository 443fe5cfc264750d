//! One function per subcommand. Each writes its CSV into `--out` and prints
//! a one-line summary.

use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use recur_core::dynamics::{random_point, typical_orbit, MapKind, MapSpec, TorusPoint};
use recur_core::lyapunov::{estimate_exponents, exact_exponents, theorem_bounds};
use recur_core::numtheory::{
    borel_cantelli_lower, covering_time, periodic_count_from_eigenvalues, periodic_points, PeriodicKind,
};
use recur_core::recurrence::{
    default_k_max, itinerary, slope_series, tau_bowen_sample, tau_word, BowenBallSpec, Ball, Partition, TauMethod,
    Word,
};
use recur_core::spectrum::{
    box_dimension, geometric_grid, linear_entropy, spectrum_curve, youngs_check, EmpiricalMeasure,
    ESS_SUP_PERCENTILE,
};
use recur_core::stats::{linear_fit, percentile};

use crate::config::{load_map, parse_list, parse_point, ConfigEcho, LoadedMap};
use crate::output::{num, opt_int, opt_num, write_text, Metadata, ResultFile};
use crate::svg::{render, Plot, Series, Style};
use crate::{CliError, Common, MethodArg, Outcome};

fn require_map(c: &Common) -> Result<LoadedMap, CliError> {
    let arg = c
        .map
        .as_deref()
        .ok_or_else(|| CliError::Config("--map is required".into()))?;
    load_map(arg)
}

fn metadata<A: Serialize>(command: &str, c: &Common, map: Option<&LoadedMap>, params: &A) -> Result<Metadata, CliError> {
    let echo = ConfigEcho {
        command,
        map: map.map(|m| &m.map),
        seed: c.seed,
        params,
    };
    Metadata::new(&echo, map.map(|m| m.source.as_str()))
}

fn point_or_random(x: Option<&str>, map: &MapSpec, seed: u64) -> Result<TorusPoint, CliError> {
    match x {
        Some(s) => parse_point(s, map),
        None => Ok(random_point(map.dim(), &mut ChaCha8Rng::seed_from_u64(seed))),
    }
}

fn tau_method(method: MethodArg, samples: usize) -> TauMethod {
    match method {
        MethodArg::Exact => TauMethod::Exact,
        MethodArg::Sample => TauMethod::Sample { samples },
    }
}

fn plot_to(c: &Common, name: &str, plot: &Plot) -> Result<(), CliError> {
    if c.plot {
        write_text(&c.out, name, &render(plot)?)?;
    }
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct ExponentsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 100_000)]
    pub iters: usize,
    /// Base point (only fixes the dimension; the maps are linear).
    #[arg(long)]
    pub x: Option<String>,
}

pub fn exponents(a: &ExponentsArgs) -> Result<Outcome, CliError> {
    let m = require_map(&a.common)?;
    let x = point_or_random(a.x.as_deref(), &m.map, a.common.seed)?;
    let est = estimate_exponents(&m.map, &x, a.iters, a.common.seed)?;
    let exact = exact_exponents(&m.map);
    let mut meta = metadata("exponents", &a.common, Some(&m), a)?;
    match theorem_bounds(&exact) {
        Ok(b) => meta.push_json("theorem_bounds", &b)?,
        Err(e) => meta.push("theorem_bounds", e.to_string()),
    }
    let mut f = ResultFile::create(&a.common.out, "exponents.csv", &meta, &["index", "estimate", "exact", "abs_error"])?;
    let mut worst: f64 = 0.0;
    for (i, (e, x)) in est.exponents().iter().zip(exact.exponents()).enumerate() {
        worst = worst.max((e - x).abs());
        f.row([i.to_string(), num(*e), num(*x), num((e - x).abs())])?;
    }
    f.finish()?;
    let series = vec![
        Series::new("estimate", est.exponents().iter().enumerate().map(|(i, &v)| (i as f64, v)).collect(), Style::Markers),
        Series::new("exact", exact.exponents().iter().enumerate().map(|(i, &v)| (i as f64, v)).collect(), Style::Dashed),
    ];
    plot_to(
        &a.common,
        "exponents.svg",
        &Plot {
            title: format!("Lyapunov exponents of {}", m.map.id()),
            x_label: "index".into(),
            y_label: "exponent".into(),
            series,
        },
    )?;
    println!(
        "exponents: {} estimate {:?}, exact {:?}, max abs error {worst:.3e}",
        m.map.id(),
        est.exponents(),
        exact.exponents()
    );
    Ok(Outcome::Complete)
}

#[derive(Debug, Args, Serialize)]
pub struct ReturnTimeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Ball center, comma separated.
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub r: f64,
    /// Search horizon; defaults to ⌈4(−log r)/λᵘ⌉.
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

pub fn return_time(a: &ReturnTimeArgs) -> Result<Outcome, CliError> {
    let m = require_map(&a.common)?;
    let x = parse_point(&a.x, &m.map)?;
    let ball = Ball::new(x, a.r)?;
    let k_max = match a.k_max {
        Some(k) => k,
        None => default_k_max(&m.map, a.r)?,
    };
    let res = tau_method(a.method, a.samples).tau(&m.map, &ball, k_max, a.common.seed)?;
    let meta = metadata("return-time", &a.common, Some(&m), a)?;
    let mut f = ResultFile::create(
        &a.common.out,
        "return_time.csv",
        &meta,
        &["r", "tau", "cutoff", "method", "ambiguous_at", "witness"],
    )?;
    let witness = match &res.witness {
        Some(w) => serde_json::to_string(w)?,
        None => String::new(),
    };
    f.row([
        num(a.r),
        opt_int(res.tau),
        res.cutoff.to_string(),
        res.method.as_str().to_string(),
        opt_int(res.ambiguous_at),
        witness,
    ])?;
    f.finish()?;
    match res.tau {
        Some(t) => println!("return-time: tau = {t} ({})", res.method.as_str()),
        None => println!("return-time: censored, no return up to k_max = {k_max}"),
    }
    Ok(Outcome::partial_if(res.is_censored() || res.is_ambiguous()))
}

#[derive(Debug, Args, Serialize)]
pub struct SlopeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Ball center; random (from --seed) when omitted.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long, default_value_t = 1e-5)]
    pub rmin: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub rmax: f64,
    #[arg(long, default_value_t = 24)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long)]
    pub k_max: Option<usize>,
}

pub fn slope(a: &SlopeArgs) -> Result<Outcome, CliError> {
    let m = require_map(&a.common)?;
    let x = point_or_random(a.x.as_deref(), &m.map, a.common.seed)?;
    let s = slope_series(
        &m.map,
        &x,
        a.rmin,
        a.rmax,
        a.grid,
        tau_method(a.method, a.samples),
        a.k_max,
        a.common.seed,
    )?;
    let bounds = theorem_bounds(&exact_exponents(&m.map)).ok();
    let mut meta = metadata("slope", &a.common, Some(&m), a)?;
    meta.push_json("x", &x)?;
    meta.push_json("summary", &s.summary)?;
    meta.push_json("theorem_bounds", &bounds)?;
    let mut f = ResultFile::create(
        &a.common.out,
        "slope.csv",
        &meta,
        &["r", "neg_log_r", "tau", "ratio", "method", "censored", "ambiguous", "retried"],
    )?;
    for p in &s.points {
        f.row([
            num(p.r),
            num(-p.r.ln()),
            opt_int(p.tau),
            opt_num(p.ratio),
            p.method.as_str().to_string(),
            p.censored.to_string(),
            p.ambiguous.to_string(),
            p.retried.to_string(),
        ])?;
    }
    f.finish()?;

    if a.common.plot {
        let xs: Vec<f64> = s.points.iter().map(|p| -p.r.ln()).collect();
        let (lo, hi) = (xs[0], xs[xs.len() - 1]);
        let mut series = vec![Series::new(
            "tau / (-log r)",
            s.points.iter().filter_map(|p| p.ratio.map(|q| (-p.r.ln(), q))).collect(),
            Style::Line,
        )];
        if let Some(b) = bounds {
            series.push(Series::new(format!("lower {:.6}", b.lower), vec![(lo, b.lower), (hi, b.lower)], Style::Dashed));
            if let Some(u) = b.upper {
                if (u - b.lower).abs() > 1e-9 {
                    series.push(Series::new(format!("upper {u:.6}"), vec![(lo, u), (hi, u)], Style::Dashed));
                }
            }
        }
        plot_to(
            &a.common,
            "slope.svg",
            &Plot {
                title: format!("Return-time slope, {}", m.map.id()),
                x_label: "-log r".into(),
                y_label: "tau / (-log r)".into(),
                series,
            },
        )?;
        let mut series = vec![Series::new(
            "tau",
            s.points.iter().filter_map(|p| p.tau.map(|t| (-p.r.ln(), t as f64))).collect(),
            Style::Markers,
        )];
        if let (Some(k), Some(c)) = (s.summary.slope, s.summary.intercept) {
            series.push(Series::new(format!("fit slope {k:.4}"), vec![(lo, k * lo + c), (hi, k * hi + c)], Style::Line));
        }
        plot_to(
            &a.common,
            "tau.svg",
            &Plot {
                title: format!("Return time, {}", m.map.id()),
                x_label: "-log r".into(),
                y_label: "tau".into(),
                series,
            },
        )?;
    }
    println!(
        "slope: {} regression slope {} (R² {}), liminf_est {}, limsup_est {}, censored {}/{}",
        m.map.id(),
        s.summary.slope.map_or("n/a".into(), |v| format!("{v:.6}")),
        s.summary.r2.map_or("n/a".into(), |v| format!("{v:.4}")),
        s.summary.liminf_est.map_or("n/a".into(), |v| format!("{v:.6}")),
        s.summary.limsup_est.map_or("n/a".into(), |v| format!("{v:.6}")),
        s.summary.censored,
        s.points.len()
    );
    if s.summary.fixed_point_warning {
        println!("slope: warning: x behaves like a fixed point; the slope says nothing about typical points");
    }
    Ok(Outcome::partial_if(s.summary.partial || s.points.iter().any(|p| p.ambiguous)))
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Orbit length of the empirical measure.
    #[arg(long, default_value_t = 1_000_000)]
    pub orbit_len: usize,
    /// Comma-separated q values.
    #[arg(long, default_value = "-1,-0.75,-0.5,-0.25,0", allow_hyphen_values = true)]
    pub q: String,
    /// Orbit points at which pointwise dimensions are computed.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, default_value_t = 2e-3)]
    pub rmin: f64,
    #[arg(long, default_value_t = 0.2)]
    pub rmax: f64,
    #[arg(long, default_value_t = 12)]
    pub grid: usize,
    #[arg(long)]
    pub k_max: Option<usize>,
}

/// Box sizes `2^-1 … 2^-levels`.
pub fn dyadic_scales(levels: u32) -> Vec<f64> {
    (1..=levels).map(|j| 0.5f64.powi(j as i32)).collect()
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Outcome, CliError> {
    let m = require_map(&a.common)?;
    let qs = parse_list(&a.q)?;
    let grid = geometric_grid(a.rmin, a.rmax, a.grid)?;
    let orbit = typical_orbit(&m.map, a.orbit_len, a.common.seed)?;
    let mu = EmpiricalMeasure::new(&orbit, a.rmin)?;
    let curve = spectrum_curve(&m.map, &mu, &qs, a.points, &grid, a.k_max, a.common.seed)?;
    let levels = match m.map.dim() {
        1 => 14,
        2 => 8,
        _ => 4,
    };
    let boxes = box_dimension(&mu, &dyadic_scales(levels))?;
    let exploratory = m.map.kind() != MapKind::ToralAuto2d;
    let young = youngs_check(&exact_exponents(&m.map), linear_entropy(&m.map), boxes.dim);

    let mut meta = metadata("spectrum", &a.common, Some(&m), a)?;
    meta.push_json(
        "approximations",
        &serde_json::json!({
            "inf_at_center": true,
            "ess_sup_percentile": ESS_SUP_PERCENTILE,
            "dropped_q": curve.dropped_q,
            "failed_points": curve.per_q.iter().map(|d| d.failed).collect::<Vec<_>>(),
            "exploratory": exploratory,
        }),
    )?;
    meta.push_json("affine_fit", &curve.affine_fit())?;
    meta.push_json("box_dimension", &boxes)?;
    match &young {
        Ok(y) => meta.push_json("youngs_check", y)?,
        Err(e) => meta.push("youngs_check", e.to_string()),
    }
    let mut f = ResultFile::create(&a.common.out, "spectrum.csv", &meta, &["q", "alpha", "r2", "n_points"])?;
    for (i, d) in curve.per_q.iter().enumerate() {
        f.row([num(d.q), num(curve.alpha_values[i]), num(d.r2), d.n_points.to_string()])?;
    }
    f.finish()?;
    let fit = curve.affine_fit();
    if a.common.plot {
        let pts: Vec<(f64, f64)> = curve.q_values.iter().copied().zip(curve.alpha_values.iter().copied()).collect();
        let mut series = vec![Series::new("alpha(q)", pts, Style::Markers)];
        if let Some(f) = fit {
            let (lo, hi) = (curve.q_values[0], curve.q_values[curve.q_values.len() - 1]);
            series.push(Series::new(
                format!("fit slope {:.4}", f.slope),
                vec![(lo, f.slope * lo + f.intercept), (hi, f.slope * hi + f.intercept)],
                Style::Line,
            ));
        }
        plot_to(
            &a.common,
            "spectrum.svg",
            &Plot {
                title: format!("Recurrence spectrum, {}", m.map.id()),
                x_label: "q".into(),
                y_label: "alpha(q)".into(),
                series,
            },
        )?;
    }
    println!(
        "spectrum: {} alpha {:?}; fit slope {} intercept {}; box dimension {:.4}{}",
        m.map.id(),
        curve.alpha_values.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>(),
        fit.map_or("n/a".into(), |f| format!("{:.4}", f.slope)),
        fit.map_or("n/a".into(), |f| format!("{:.4}", f.intercept)),
        boxes.dim,
        if exploratory { " (exploratory: not a surface diffeomorphism)" } else { "" }
    );
    Ok(Outcome::partial_if(!curve.dropped_q.is_empty()))
}

#[derive(Debug, Args, Serialize)]
pub struct CoveringArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Comma-separated strip widths.
    #[arg(long, default_value = "0.02,0.01,0.005,0.002")]
    pub r: String,
}

pub fn covering(a: &CoveringArgs) -> Result<Outcome, CliError> {
    let rs = parse_list(&a.r)?;
    let certs = rs.iter().map(|&r| covering_time(r)).collect::<Result<Vec<_>, _>>()?;
    let meta = metadata("covering", &a.common, None, a)?;
    let mut f = ResultFile::create(
        &a.common.out,
        "covering.csv",
        &meta,
        &["r", "n_formula", "n_observed", "density_gap", "threshold", "wraps", "validates"],
    )?;
    for c in &certs {
        f.row([
            num(c.r),
            c.n_formula.to_string(),
            opt_int(c.n_observed),
            num(c.density_gap),
            num(c.threshold),
            c.wraps.to_string(),
            c.validates().to_string(),
        ])?;
    }
    f.finish()?;
    let ok = certs.iter().filter(|c| c.validates()).count();
    println!("covering: {ok}/{} radii certified within the formula bound", certs.len());
    Ok(Outcome::partial_if(ok < certs.len()))
}

#[derive(Debug, Args, Serialize)]
pub struct PeriodicArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 10)]
    pub pmax: usize,
}

pub fn periodic(a: &PeriodicArgs) -> Result<Outcome, CliError> {
    let m = require_map(&a.common)?;
    let kind = match m.map.kind() {
        MapKind::ToralAuto2d => PeriodicKind::Auto,
        MapKind::ToralEndo2d => PeriodicKind::Endo,
        _ => {
            return Err(recur_core::Error::Unsupported(format!(
                "periodic counts are for planar linear maps, got {}",
                m.map.id()
            ))
            .into())
        }
    };
    let matrix = m.map.matrix().expect("planar map");
    let counts = periodic_points(matrix, a.pmax, kind)?;
    let meta = metadata("periodic", &a.common, Some(&m), a)?;
    let mut f = ResultFile::create(&a.common.out, "periodic.csv", &meta, &["p", "count", "eigen_estimate"])?;
    for (i, c) in counts.iter().enumerate() {
        let p = i as u32 + 1;
        f.row([p.to_string(), c.to_string(), num(periodic_count_from_eigenvalues(matrix, p))])?;
    }
    f.finish()?;
    let head: Vec<String> = counts.iter().take(6).map(|c| c.to_string()).collect();
    println!("periodic: {} counts {}{}", m.map.id(), head.join(", "), if counts.len() > 6 { ", …" } else { "" });
    Ok(Outcome::Complete)
}

#[derive(Debug, Args, Serialize)]
pub struct WordReturnArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// A word of decimal digits, e.g. 0101.
    #[arg(long)]
    pub word: Option<String>,
    /// Number of uniformly random binary words.
    #[arg(long)]
    pub random: Option<usize>,
    /// Word length (random words and itineraries).
    #[arg(long, default_value_t = 128)]
    pub length: usize,
    /// Itinerary start point under --map.
    #[arg(long)]
    pub x: Option<String>,
    /// Grid partition cells per axis for itineraries of planar maps.
    #[arg(long, default_value_t = 2)]
    pub cells: u32,
}

pub fn random_words(count: usize, len: usize, seed: u64) -> Result<Vec<Word>, CliError> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Ok(Word::new((0..len).map(|_| rng.gen_range(0..2u32)).collect())?))
        .collect()
}

pub fn word_return(a: &WordReturnArgs) -> Result<Outcome, CliError> {
    let mut words = Vec::new();
    let mut boundary = false;
    let mut loaded = None;
    if let Some(w) = &a.word {
        words.push(Word::parse(w)?);
    }
    if let Some(n) = a.random {
        words.extend(random_words(n, a.length, a.common.seed)?);
    }
    if let Some(x) = &a.x {
        let m = require_map(&a.common)?;
        let p = parse_point(x, &m.map)?;
        let part = if m.map.kind() == MapKind::Doubling1d {
            Partition::BinaryMarkov
        } else {
            Partition::Grid { m: a.cells }
        };
        let it = itinerary(&m.map, &p, a.length, part)?;
        boundary = it.boundary;
        words.push(it.word);
        loaded = Some(m);
    }
    if words.is_empty() {
        return Err(CliError::Config("give --word, --random or --x".into()));
    }
    let mut meta = metadata("word-return", &a.common, loaded.as_ref(), a)?;
    meta.push("itinerary_near_boundary", boundary.to_string());
    let mut f = ResultFile::create(&a.common.out, "word_return.csv", &meta, &["word", "n", "tau", "ratio"])?;
    let mut ratios = Vec::with_capacity(words.len());
    for w in &words {
        let t = tau_word(w, false);
        let ratio = t as f64 / w.len() as f64;
        ratios.push(ratio);
        f.row([w.to_string(), w.len().to_string(), t.to_string(), num(ratio)])?;
    }
    f.finish()?;
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    println!(
        "word-return: {} words, mean tau/n {mean:.4}, 5th percentile {:.4}, max {:.4}",
        ratios.len(),
        percentile(&ratios, 5.0).unwrap_or(f64::NAN),
        ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    );
    Ok(Outcome::partial_if(boundary))
}

#[derive(Debug, Args, Serialize)]
pub struct BowenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long)]
    pub x: String,
    /// Backward depth.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Forward depth.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 100)]
    pub k_max: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

pub fn bowen(a: &BowenArgs) -> Result<Outcome, CliError> {
    let m = require_map(&a.common)?;
    let spec = BowenBallSpec {
        center: parse_point(&a.x, &m.map)?,
        m: a.m,
        n: a.n,
        eps: a.eps,
    };
    let res = tau_bowen_sample(&m.map, &spec, a.k_max, a.samples, a.common.seed)?;
    let meta = metadata("bowen", &a.common, Some(&m), a)?;
    let mut f = ResultFile::create(&a.common.out, "bowen.csv", &meta, &["m", "n", "eps", "tau", "cutoff", "witness"])?;
    let witness = match &res.witness {
        Some(w) => serde_json::to_string(w)?,
        None => String::new(),
    };
    f.row([
        a.m.to_string(),
        a.n.to_string(),
        num(a.eps),
        opt_int(res.tau),
        res.cutoff.to_string(),
        witness,
    ])?;
    f.finish()?;
    match res.tau {
        Some(t) => println!("bowen: sampled tau ≤ {t}"),
        None => println!("bowen: censored, no sampled return up to {}", a.k_max),
    }
    Ok(Outcome::partial_if(res.is_censored()))
}

#[derive(Debug, Args, Serialize)]
pub struct BorelCantelliArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.25)]
    pub a: f64,
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

pub fn borel_cantelli(a: &BorelCantelliArgs) -> Result<Outcome, CliError> {
    let m = match a.common.map.as_deref() {
        Some(_) => require_map(&a.common)?,
        None => load_map("expanding")?,
    };
    let rep = borel_cantelli_lower(&m.map, a.a, a.n_max, a.trials, a.common.seed)?;
    let mut meta = metadata("borel-cantelli", &a.common, Some(&m), a)?;
    meta.push("c", num(rep.c));
    let mut f = ResultFile::create(
        &a.common.out,
        "borel_cantelli.csv",
        &meta,
        &["n", "radius", "empirical_freq", "envelope", "trivial"],
    )?;
    for row in &rep.rows {
        f.row([
            row.n.to_string(),
            num(row.radius),
            num(row.empirical_freq),
            num(row.envelope),
            row.trivial.to_string(),
        ])?;
    }
    f.finish()?;
    let fit_rows: Vec<_> = rep.rows.iter().filter(|r| !r.trivial && r.empirical_freq > 0.0).collect();
    let decay = linear_fit(
        &fit_rows.iter().map(|r| r.n as f64).collect::<Vec<_>>(),
        &fit_rows.iter().map(|r| r.empirical_freq.ln()).collect::<Vec<_>>(),
    );
    println!(
        "borel-cantelli: c = {:.6}, envelope ratio a²·det = {:.4}, fitted log-frequency decay {}",
        rep.c,
        a.a * a.a * rep.det.abs() as f64,
        decay.map_or("n/a".into(), |f| format!("{:.4}", f.slope))
    );
    Ok(Outcome::Complete)
}
