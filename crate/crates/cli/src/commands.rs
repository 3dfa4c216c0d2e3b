//! Subcommand implementations. Each writes its tables, figures, the
//! resolved `config.toml` and a `VERSION` file into the output directory.

use crate::config::RunConfig;
use crate::svg::{self, Area, Band, Panel, Scale, Series};
use crate::CliError;
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use symris::geometry::{self, Binning};
use symris::montecarlo::{
    self, checkpoint_csv, ledger_csv, outcome_rows_csv, point_seed, Classifier, LabelTag,
    OutcomeKind, TrialLedger,
};
use symris::phases::{self, BoundaryKind, Crossings, PhaseBoundary, SweepPoint};
use symris::sampling::StateFile;
use symris::{Method, MethodParams, RngStream, SymState64};

struct Output {
    dir: PathBuf,
}

impl Output {
    fn create(cfg: &RunConfig) -> Result<Self, CliError> {
        let dir = cfg.out.clone();
        std::fs::create_dir_all(&dir)
            .map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
        let out = Self { dir };
        out.write("config.toml", &cfg.to_toml())?;
        out.write("VERSION", &format!("symris {}\n", symris::VERSION))?;
        Ok(out)
    }

    fn write(&self, name: &str, contents: &str) -> Result<(), CliError> {
        let p = self.dir.join(name);
        std::fs::write(&p, contents)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", p.display())))
    }
}

fn to_json<S: serde::Serialize>(v: &S) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn sweep_points(ledgers: &[TrialLedger]) -> Vec<SweepPoint<f64>> {
    ledgers
        .iter()
        .map(|l| {
            let p = l.probabilities();
            SweepPoint {
                ancilla: l.params.ancilla as f64,
                p_npt: p[0],
                p_be: p[1],
                p_sep: p[2],
            }
        })
        .collect()
}

fn ancilla_label(method: Method) -> &'static str {
    match method {
        Method::Qubits => "N_a",
        Method::Qudit => "d_a",
    }
}

/// Background band per grid point showing the largest of NPT, PPTBE and SEP,
/// reaching halfway to each neighbour.
fn dominant_bands(xs: &[f64], probs: &[[f64; 4]]) -> Vec<Band> {
    let colors = [svg::RED, svg::YELLOW, svg::GREEN];
    (0..xs.len())
        .map(|i| {
            let x0 = if i == 0 {
                xs[0]
            } else {
                0.5 * (xs[i - 1] + xs[i])
            };
            let x1 = if i + 1 == xs.len() {
                xs[i]
            } else {
                0.5 * (xs[i] + xs[i + 1])
            };
            let best = (0..3)
                .max_by(|&a, &b| probs[i][a].partial_cmp(&probs[i][b]).unwrap())
                .unwrap();
            Band {
                x0,
                x1,
                color: colors[best].to_string(),
            }
        })
        .collect()
}

fn scan_figure(cfg: &RunConfig, ledgers: &[TrialLedger]) -> String {
    let xs: Vec<f64> = ledgers.iter().map(|l| l.params.ancilla as f64).collect();
    let probs: Vec<[f64; 4]> = ledgers.iter().map(|l| l.probabilities()).collect();
    let curve = |i: usize| {
        xs.iter()
            .zip(&probs)
            .map(|(&x, p)| (x, p[i]))
            .collect::<Vec<_>>()
    };
    let mut main = Panel::new(
        format!("{} N={}", cfg.method, cfg.n_qubits),
        ancilla_label(cfg.method),
        "probability",
    );
    main.y_range = Some((0.0, 1.0));
    main.bands = dominant_bands(&xs, &probs);
    main.series.push(Series::new("NPT", svg::RED, curve(0)));
    main.series
        .push(Series::new("PPTBE", svg::YELLOW, curve(1)));
    main.series.push(Series::new("SEP", svg::GREEN, curve(2)));
    for (i, r) in montecarlo::refined_columns(ledgers).iter().enumerate() {
        let pts = ledgers
            .iter()
            .map(|l| {
                let c = *l.refined_counts().get(r).unwrap_or(&0);
                (l.params.ancilla as f64, c as f64 / l.n as f64)
            })
            .collect();
        main.series.push(
            Series::new(r.clone(), svg::BROWNS[i % svg::BROWNS.len()], pts)
                .dashed()
                .plain(),
        );
    }
    let mut tags = Panel::new(
        "bound entangled by tag",
        ancilla_label(cfg.method),
        "probability",
    );
    let tag_curve = |t: LabelTag| {
        ledgers
            .iter()
            .map(|l| (l.params.ancilla as f64, l.tag_count(t) as f64 / l.n as f64))
            .collect()
    };
    tags.series
        .push(Series::new("BE_X", svg::BLUE, tag_curve(LabelTag::X)));
    tags.series
        .push(Series::new("BE_all", svg::YELLOW, tag_curve(LabelTag::All)));
    tags.series.push(Series::new("UNK", svg::GREY, curve(3)));
    svg::render(&[main, tags], 1, 1.0)
}

pub fn scan(cfg: &RunConfig) -> Result<(), CliError> {
    let grid = cfg.grid()?;
    let ledgers = montecarlo::sweep::<f64>(
        cfg.method,
        cfg.n_qubits,
        &grid,
        cfg.trials,
        cfg.seed,
        &cfg.classify_config(),
        cfg.workers,
    )?;
    let out = Output::create(cfg)?;
    out.write("probabilities.csv", &ledger_csv(&ledgers))?;
    out.write("outcomes.csv", &outcome_rows_csv(&ledgers))?;
    let crossings = if ledgers.len() >= 2 {
        Some(phases::curve_intersections(&sweep_points(&ledgers))?)
    } else {
        None
    };
    out.write("crossings.json", &to_json(&crossings))?;
    out.write("scan.svg", &scan_figure(cfg, &ledgers))?;

    println!(
        "{:>8} {:>8} {:>8} {:>8} {:>8}",
        ancilla_label(cfg.method),
        "NPT",
        "PPTBE",
        "SEP",
        "UNK"
    );
    for l in &ledgers {
        let p = l.probabilities();
        println!(
            "{:>8} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            l.params.ancilla, p[0], p[1], p[2], p[3]
        );
    }
    if let Some(c) = crossings {
        print_crossings(&c);
    }
    println!("wrote {}", out.dir.display());
    Ok(())
}

fn print_crossings(c: &Crossings<f64>) {
    for (name, x) in [("NPT/BE", c.npt_to_be), ("BE/SEP", c.be_to_sep)] {
        match x {
            Some(x) if x.is_ambiguous() => {
                println!(
                    "{name} crossing at {:.3} (ambiguous: {} sign changes)",
                    x.ancilla, x.multiplicity
                )
            }
            Some(x) => println!("{name} crossing at {:.3}", x.ancilla),
            None => println!("{name} crossing: none"),
        }
    }
}

pub fn classify(cfg: &RunConfig) -> Result<(), CliError> {
    let (rho, source, classifier) = match &cfg.state {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::io(format!("cannot read state {}: {e}", path.display())))?;
            let rho: SymState64 = StateFile::from_json(&text)?.to_state()?;
            let c = Classifier::<f64>::for_register(rho.n_qubits(), cfg.classify_config())?;
            (rho, json!({ "file": path.display().to_string() }), c)
        }
        None => {
            let grid = cfg.grid()?;
            let [a] = grid[..] else {
                return Err(CliError::usage(
                    "classify needs a single ancilla value, e.g. --ancilla 12",
                ));
            };
            let params = MethodParams::new(cfg.method, cfg.n_qubits, a)?;
            let c = Classifier::<f64>::new(params, cfg.classify_config())?;
            let rho = c
                .generator()
                .draw(RngStream::new(point_seed(cfg.seed, a), cfg.trial))?;
            let source = json!({
                "method": cfg.method.to_string(),
                "n_qubits": cfg.n_qubits,
                "ancilla": a,
                "seed": cfg.seed,
                "trial": cfg.trial,
            });
            (rho, source, c)
        }
    };
    let result = classifier.classify_state(&rho)?;
    let verified = classifier.certifier().verify(&rho, &result.certificate);
    let n = rho.n_qubits();
    let f = &result.flags;
    let cuts: Vec<_> = (1..=f.flags.len())
        .map(|k| {
            json!({
                "k": k,
                "partition": format!("{}|{}", n - k, k),
                "flag": f.flags[k - 1],
                "min_eig": f.min_eig[k - 1],
                "spectrum": f.spectra[k - 1],
            })
        })
        .collect();
    let doc = json!({
        "n_qubits": n,
        "source": source,
        "cuts": cuts,
        "outcome": result.outcome.kind,
        "label": result.outcome.label(),
        "tag": result.outcome.tag,
        "verdict": result.certificate.verdict,
        "certificate_verified": verified.is_ok(),
        "certificate_check": verified.err(),
        "certificate": result.certificate,
    });
    let out = Output::create(cfg)?;
    let text = to_json(&doc);
    out.write("verdict.json", &text)?;
    print!("{text}");
    Ok(())
}

pub fn geometry(cfg: &RunConfig) -> Result<(), CliError> {
    let grid = cfg.grid()?;
    let binning = Binning {
        bins: cfg.bins,
        upper: None,
    };
    let mut draws = Vec::with_capacity(grid.len());
    for &a in &grid {
        let params = MethodParams::new(cfg.method, cfg.n_qubits, a)?;
        let c = Classifier::<f64>::new(params, cfg.classify_config())?;
        let seed = point_seed(cfg.seed, a);
        let states: Vec<SymState64> = (0..cfg.sample as u64)
            .map(|i| c.generator().draw(RngStream::new(seed, i)))
            .collect::<symris::Result<_>>()?;
        draws.push((a, states));
    }
    let mmd = geometry::mmd_sweep(&draws)?;
    let out = Output::create(cfg)?;

    let mut csv = String::from("ancilla,mean,std\n");
    for (a, m) in &mmd {
        let _ = writeln!(csv, "{a},{},{}", m.mean, m.std);
    }
    out.write("mmd.csv", &csv)?;
    let mut p = Panel::new(
        format!(
            "distance to maximally mixed, {} N={}",
            cfg.method, cfg.n_qubits
        ),
        ancilla_label(cfg.method),
        "D_HS(rho, rho_0)",
    );
    p.series.push(Series::new(
        "mean",
        svg::BLUE,
        mmd.iter().map(|(a, m)| (*a as f64, m.mean)).collect(),
    ));
    p.series.push(
        Series::new(
            "mean + std",
            svg::GREY,
            mmd.iter()
                .map(|(a, m)| (*a as f64, m.mean + m.std))
                .collect(),
        )
        .dashed()
        .plain(),
    );
    p.series.push(
        Series::new(
            "mean - std",
            svg::GREY,
            mmd.iter()
                .map(|(a, m)| (*a as f64, m.mean - m.std))
                .collect(),
        )
        .dashed()
        .plain(),
    );
    out.write("mmd.svg", &svg::render(&[p], 1, 1.0))?;

    let focus = cfg.focus.unwrap_or(grid[0]);
    let params = MethodParams::new(cfg.method, cfg.n_qubits, focus)?;
    let c = Classifier::<f64>::new(params, cfg.classify_config())?;
    let seed = point_seed(cfg.seed, focus);
    let states = if cfg.keep == "be" {
        let max_trials = 100 * cfg.sample as u64;
        montecarlo::collect_states(&c, seed, cfg.sample, max_trials, cfg.workers, |o| {
            o.kind == OutcomeKind::PptBe
        })?
    } else {
        (0..cfg.sample as u64)
            .map(|i| c.generator().draw(RngStream::new(seed, i)))
            .collect::<symris::Result<_>>()?
    };
    if states.len() < 2 {
        return Err(CliError::numerical(format!(
            "only {} {} state(s) found at {}={focus}; pairwise statistics need two",
            states.len(),
            if cfg.keep == "be" {
                "bound entangled"
            } else {
                "sampled"
            },
            ancilla_label(cfg.method)
        )));
    }
    let (pairs, mean, var, max) = geometry::pairwise_moments(&states)?;
    let pdf = geometry::pairwise_pdf(&states, binning)?;
    out.write("pairwise_pdf.csv", &pdf.to_csv())?;
    let mut p = Panel::new(
        format!(
            "pairwise distances, {}={focus}, {} states",
            ancilla_label(cfg.method),
            states.len()
        ),
        "D_HS",
        "density",
    );
    p.legend = false;
    p.series
        .push(Series::new("pdf", svg::BLUE, histogram_points(&pdf)).plain());
    out.write("pairwise_pdf.svg", &svg::render(&[p], 1, 1.0))?;

    let panels = geometry::dicke_projector_pdfs(&states, binning)?;
    let mut csv = String::from("alpha,beta,reference,mean,bin_left,bin_right,density\n");
    let mut figs = Vec::with_capacity(panels.len());
    for d in &panels {
        for (v, w) in d.pdf.density.iter().zip(d.pdf.bin_edges.windows(2)) {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                d.alpha, d.beta, d.reference, d.mean, w[0], w[1], v
            );
        }
        let mut p = Panel::new(
            format!("alpha={} beta={}", d.alpha, d.beta),
            "D_HS",
            "density",
        );
        p.legend = false;
        p.series
            .push(Series::new("pdf", svg::BLUE, histogram_points(&d.pdf)).plain());
        p.x_marks.push((d.reference, "rho_0".into()));
        figs.push(p);
    }
    out.write("dicke_pdfs.csv", &csv)?;
    out.write("dicke_grid.svg", &svg::render(&figs, cfg.n_qubits + 1, 0.6))?;

    let summary = json!({
        "method": cfg.method.to_string(),
        "n_qubits": cfg.n_qubits,
        "mmd": mmd.iter().map(|(a, m)| json!({"ancilla": a, "mean": m.mean, "std": m.std, "n": m.n})).collect::<Vec<_>>(),
        "focus": focus,
        "keep": cfg.keep,
        "states": states.len(),
        "pairwise": {"pairs": pairs, "mean": mean, "variance": var, "max": max},
        "dicke": panels.iter().map(|d| json!({"alpha": d.alpha, "beta": d.beta, "reference": d.reference, "mean": d.mean})).collect::<Vec<_>>(),
    });
    out.write("geometry.json", &to_json(&summary))?;
    println!(
        "{} states at {}={focus}: pairwise mean {mean:.5}, variance {var:.3e}, max {max:.5}",
        states.len(),
        ancilla_label(cfg.method)
    );
    println!("wrote {}", out.dir.display());
    Ok(())
}

fn histogram_points(pdf: &geometry::HistogramPdf) -> Vec<(f64, f64)> {
    pdf.density
        .iter()
        .zip(pdf.bin_edges.windows(2))
        .map(|(d, w)| (0.5 * (w[0] + w[1]), *d))
        .collect()
}

/// Sweep points of one `probabilities.csv`, keyed by register size.
fn read_scan(path: &Path) -> Result<(Method, usize, Vec<SweepPoint<f64>>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read scan {}: {e}", path.display())))?;
    let bad = |why: String| CliError::usage(format!("{}: {why}", path.display()));
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| bad("empty file".into()))?
        .split(',')
        .collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| bad(format!("missing column {name}")))
    };
    let (cm, cn, ca) = (col("method")?, col("N")?, col("ancilla")?);
    let (c0, c1, c2) = (col("P_NPT")?, col("P_PPTBE")?, col("P_SEP")?);
    let mut meta: Option<(Method, usize)> = None;
    let mut pts = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        let num = |j: usize| -> Result<f64, CliError> {
            f.get(j)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| bad(format!("row {}: bad value in column {}", i + 2, header[j])))
        };
        let method: Method = f
            .get(cm)
            .ok_or_else(|| bad(format!("row {}: short row", i + 2)))?
            .parse()
            .map_err(|e: symris::Error| bad(e.to_string()))?;
        let n = num(cn)? as usize;
        match meta {
            None => meta = Some((method, n)),
            Some(m) if m != (method, n) => {
                return Err(bad("rows mix methods or register sizes".into()))
            }
            _ => {}
        }
        pts.push(SweepPoint {
            ancilla: num(ca)?,
            p_npt: num(c0)?,
            p_be: num(c1)?,
            p_sep: num(c2)?,
        });
    }
    let (method, n) = meta.ok_or_else(|| bad("no data rows".into()))?;
    Ok((method, n, pts))
}

pub fn phase_diagram(cfg: &RunConfig) -> Result<(), CliError> {
    let out = Output::create(cfg)?;
    let mut sweeps: BTreeMap<usize, Vec<SweepPoint<f64>>> = BTreeMap::new();
    if cfg.scans.is_empty() {
        let grid = cfg.grid()?;
        for &n in &cfg.n_list {
            let ledgers = montecarlo::sweep::<f64>(
                cfg.method,
                n,
                &grid,
                cfg.trials,
                cfg.seed,
                &cfg.classify_config(),
                cfg.workers,
            )?;
            out.write(&format!("probabilities_N{n}.csv"), &ledger_csv(&ledgers))?;
            sweeps.insert(n, sweep_points(&ledgers));
        }
    } else {
        for p in &cfg.scans {
            let (method, n, pts) = read_scan(p)?;
            if method != cfg.method {
                return Err(CliError::usage(format!(
                    "{} holds {method} data but --method is {}",
                    p.display(),
                    cfg.method
                )));
            }
            if sweeps.insert(n, pts).is_some() {
                return Err(CliError::usage(format!("two scans for N={n}")));
            }
        }
        let missing: Vec<usize> = cfg
            .n_list
            .iter()
            .copied()
            .filter(|n| !sweeps.contains_key(n))
            .collect();
        if !missing.is_empty() {
            let cmds: Vec<String> = missing
                .iter()
                .map(|n| {
                    format!(
                        "  symris scan --method {} --n-qubits {n} --ancilla {} --trials {} --seed {} --out scan_N{n}",
                        cfg.method, cfg.ancilla, cfg.trials, cfg.seed
                    )
                })
                .collect();
            return Err(CliError::usage(format!(
                "no scan given for N = {missing:?}; produce them with\n{}",
                cmds.join("\n")
            )));
        }
    }
    if cfg.n_list.is_empty() && sweeps.is_empty() {
        return Err(CliError::usage("no register sizes given"));
    }

    let mut crossings = BTreeMap::new();
    let mut csv = String::from("N,boundary,ancilla,multiplicity\n");
    let mut points: BTreeMap<BoundaryKind, Vec<(f64, f64)>> = BTreeMap::new();
    for (&n, pts) in &sweeps {
        let c = phases::curve_intersections(pts)?;
        for (kind, x) in [
            (BoundaryKind::NptToBe, c.npt_to_be),
            (BoundaryKind::BeToSep, c.be_to_sep),
        ] {
            if let Some(x) = x {
                let _ = writeln!(
                    csv,
                    "{n},{},{},{}",
                    kind_name(kind),
                    x.ancilla,
                    x.multiplicity
                );
                points.entry(kind).or_default().push((n as f64, x.ancilla));
                if x.is_ambiguous() {
                    eprintln!(
                        "warning: N={n} {} crossing is ambiguous ({} sign changes)",
                        kind_name(kind),
                        x.multiplicity
                    );
                }
            }
        }
        crossings.insert(n.to_string(), c);
    }
    out.write("crossings.csv", &csv)?;

    let mut fits: Vec<PhaseBoundary<f64>> = Vec::new();
    for kind in [BoundaryKind::NptToBe, BoundaryKind::BeToSep] {
        let pts = points.get(&kind).cloned().unwrap_or_default();
        for &model in &cfg.fit_models {
            let fit = phases::fit_boundary(kind, &pts, model).map_err(|e| {
                CliError::usage(format!(
                    "{} boundary, {} fit: {e}; add register sizes to --n-list",
                    kind_name(kind),
                    model_name(model)
                ))
            })?;
            fits.push(fit);
        }
    }
    out.write(
        "boundaries.json",
        &to_json(&json!({ "crossings": crossings, "boundaries": fits })),
    )?;
    out.write(
        "phase_diagram.svg",
        &phase_figure(cfg, &sweeps, &points, &fits),
    )?;

    for f in &fits {
        let terms: Vec<String> = f.coefficients.iter().map(|c| format!("{c:.4}")).collect();
        println!(
            "{} {}: coefficients [{}], rss {:.4e}",
            kind_name(f.kind),
            model_name(f.model),
            terms.join(", "),
            f.rss
        );
    }
    if let (Some(lo), Some(hi)) = (
        points.get(&BoundaryKind::NptToBe),
        points.get(&BoundaryKind::BeToSep),
    ) {
        for (a, b) in lo.iter().zip(hi) {
            if a.0 == b.0 && a.1 > b.1 {
                eprintln!(
                    "warning: N={} has NPT/BE crossing above BE/SEP crossing",
                    a.0
                );
            }
        }
    }
    println!("wrote {}", out.dir.display());
    Ok(())
}

fn kind_name(k: BoundaryKind) -> &'static str {
    match k {
        BoundaryKind::NptToBe => "NPT_to_BE",
        BoundaryKind::BeToSep => "BE_to_SEP",
    }
}

fn model_name(m: phases::BoundaryModel) -> &'static str {
    match m {
        phases::BoundaryModel::Linear => "linear",
        phases::BoundaryModel::Quadratic => "quadratic",
    }
}

fn phase_figure(
    cfg: &RunConfig,
    sweeps: &BTreeMap<usize, Vec<SweepPoint<f64>>>,
    points: &BTreeMap<BoundaryKind, Vec<(f64, f64)>>,
    fits: &[PhaseBoundary<f64>],
) -> String {
    let ns: Vec<f64> = sweeps.keys().map(|&n| n as f64).collect();
    let (x0, x1) = (ns[0], ns[ns.len() - 1]);
    let top = sweeps
        .values()
        .flat_map(|p| p.iter().map(|s| s.ancilla))
        .fold(0.0, f64::max);
    let xs: Vec<f64> = (0..=40).map(|i| x0 + (x1 - x0) * i as f64 / 40.0).collect();
    // the last model requested for each boundary shapes the regions
    let curve = |kind| {
        fits.iter().rev().find(|f| f.kind == kind).map(|f| {
            xs.iter()
                .map(|&x| (x, f.model.eval(&f.coefficients, x).clamp(0.0, top)))
                .collect::<Vec<_>>()
        })
    };
    let mut p = Panel::new(
        format!("phase diagram, {}", cfg.method),
        "N",
        format!("{}*", ancilla_label(cfg.method)),
    );
    p.y_range = Some((0.0, top));
    if let (Some(lo), Some(hi)) = (curve(BoundaryKind::NptToBe), curve(BoundaryKind::BeToSep)) {
        let mut npt = vec![(x0, 0.0)];
        npt.extend(lo.iter().copied());
        npt.push((x1, 0.0));
        let mut be = lo.clone();
        be.extend(hi.iter().rev().copied());
        let mut sep = hi.clone();
        sep.push((x1, top));
        sep.push((x0, top));
        for (poly, color) in [(npt, svg::RED), (be, svg::YELLOW), (sep, svg::GREEN)] {
            p.areas.push(Area {
                polygon: poly,
                color: color.to_string(),
            });
        }
    }
    for (kind, color) in [
        (BoundaryKind::NptToBe, svg::RED),
        (BoundaryKind::BeToSep, svg::GREEN),
    ] {
        if let Some(pts) = points.get(&kind) {
            p.series.push(Series::new(
                format!("{} crossings", kind_name(kind)),
                color,
                pts.clone(),
            ));
        }
        for (i, f) in fits.iter().filter(|f| f.kind == kind).enumerate() {
            let pts = xs
                .iter()
                .map(|&x| (x, f.model.eval(&f.coefficients, x)))
                .collect();
            p.series.push(
                Series::new(
                    format!("{} {}", kind_name(kind), model_name(f.model)),
                    svg::BROWNS[i % svg::BROWNS.len()],
                    pts,
                )
                .dashed()
                .plain(),
            );
        }
    }
    svg::render(&[p], 1, 1.0)
}

pub fn convergence(cfg: &RunConfig) -> Result<(), CliError> {
    let grid = cfg.grid()?;
    let [a] = grid[..] else {
        return Err(CliError::usage(
            "convergence needs a single ancilla value, e.g. --ancilla 12",
        ));
    };
    let params = MethodParams::new(cfg.method, cfg.n_qubits, a)?;
    let c = Classifier::<f64>::new(params, cfg.classify_config())?;
    let ledger = montecarlo::estimate_with(&c, cfg.trials, point_seed(cfg.seed, a), cfg.workers)?;
    let out = Output::create(cfg)?;
    out.write("checkpoints.csv", &checkpoint_csv(&ledger))?;

    let colors = [svg::RED, svg::YELLOW, svg::GREEN, svg::GREY];
    let title = format!(
        "{} N={} {}={a}",
        cfg.method,
        cfg.n_qubits,
        ancilla_label(cfg.method)
    );
    let mut probs = Panel::new(title.clone(), "n", "probability");
    probs.x_scale = Scale::Log;
    probs.y_range = Some((0.0, 1.0));
    let mut deltas = Panel::new(title, "n", "successive difference");
    deltas.x_scale = Scale::Log;
    deltas.y_scale = Scale::Log;
    let diffs = montecarlo::successive_differences(&ledger);
    for k in OutcomeKind::ALL {
        let i = k.slot();
        probs.series.push(Series::new(
            k.label(),
            colors[i],
            ledger
                .checkpoints
                .iter()
                .map(|c| (c.n as f64, c.probs[i]))
                .collect(),
        ));
        deltas.series.push(Series::new(
            k.label(),
            colors[i],
            diffs.iter().map(|(n, d)| (*n as f64, d[i])).collect(),
        ));
    }
    out.write("convergence.svg", &svg::render(&[probs, deltas], 2, 1.0))?;

    let p = ledger.probabilities();
    println!(
        "n={}: NPT {:.4} PPTBE {:.4} SEP {:.4} UNK {:.4}",
        ledger.n, p[0], p[1], p[2], p[3]
    );
    if let Some((n, d)) = diffs.last() {
        let worst = d.iter().copied().fold(0.0, f64::max);
        println!("largest change at the last checkpoint (n={n}): {worst:.4}");
    }
    println!("wrote {}", out.dir.display());
    Ok(())
}
