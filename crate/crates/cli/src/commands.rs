//! One function per subcommand. Each writes its artifacts and returns whether
//! every property it checks holds.

use foel_core::eigen::symmetric_eigenvalues;
use foel_core::hamiltonian::build_normalized_chain;
use foel_core::qgroup::{droplet_csv, droplet_sweep, q_sector_energies_with_tol, QParam};
use foel_core::report::{Cell, CsvTable};
use foel_core::sector::{
    full_spectrum_by_s3, s3_blocks, sector_energies_with, spectrum_by_s3_csv, SectorOptions,
};
use foel_core::ssep::{check_aldous, interchange_hamiltonian, spectral_gap, ssep_generator, verify_spin_map};
use foel_core::tl::{
    check_dominance, fk_hamiltonian_matrix, is_irreducible, perron_ground_vector, tl_hamiltonian_matrix,
};
use foel_core::tl::diagram::diagram_basis_csv;
use foel_core::{ChainSpec, HalfInt, HilbertShape, SectorReport, SpinGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cli::*;
use crate::input::{couplings, parse_list, parse_spins, read_graph, System};
use crate::output::{FoelSummary, OutDir};
use crate::Failure;

fn options(tol: f64) -> SectorOptions {
    SectorOptions { strict_tol: tol, ..SectorOptions::default() }
}

fn push_sectors(table: &mut CsvTable, run: &str, report: &SectorReport) {
    for e in &report.entries {
        table.push(vec![
            Cell::from(run),
            Cell::Int(e.spin.twice()),
            Cell::from(e.dim),
            Cell::Float(e.min_energy),
            Cell::Float(e.max_energy),
        ]);
    }
}

fn sector_table() -> CsvTable {
    CsvTable::new(&["run", "S_times2", "dim", "min_energy", "max_energy"])
}

#[derive(Serialize)]
struct SpectrumSummary {
    command: &'static str,
    dim: usize,
    ground_energy: f64,
    #[serde(flatten)]
    foel: FoelSummary,
    max_ordering_ok: bool,
}

pub fn spectrum(args: &SpectrumArgs) -> Result<bool, Failure> {
    let system = System::from_source(&args.source, args.couplings.as_deref(), args.len)?;
    let out = OutDir::create(&args.out.out)?;
    let (h, shape) = system.build()?;
    let spectrum = full_spectrum_by_s3(&h, &shape, args.offset)?;
    let report = sector_energies_with(&h, &shape, options(args.foel_tol))?;
    out.csv("spectrum.csv", &spectrum_by_s3_csv(&spectrum))?;
    out.csv("sectors.csv", &report.to_csv())?;
    let ground = spectrum.iter().flat_map(|(_, v)| v.iter().copied()).fold(f64::INFINITY, f64::min);
    out.json(
        "summary.json",
        &SpectrumSummary {
            command: "spectrum",
            dim: shape.dim(),
            ground_energy: ground,
            foel: (&report.foel).into(),
            max_ordering_ok: report.max_ordering_ok,
        },
    )?;
    Ok(true)
}

#[derive(Serialize)]
struct FoelRun {
    run: String,
    #[serde(flatten)]
    foel: FoelSummary,
}

#[derive(Serialize)]
struct FoelReport {
    command: &'static str,
    foel_ok: bool,
    seed: Option<u64>,
    runs: Vec<FoelRun>,
    note: Option<String>,
}

fn random_couplings(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    (0..count).map(|_| 2.0 - rng.gen_range(0.0..2.0)).collect()
}

pub fn foel(args: &FoelArgs) -> Result<bool, Failure> {
    let system = System::from_source(&args.source, args.couplings.as_deref(), args.len)?;
    let out = OutDir::create(&args.out.out)?;
    let opts = options(args.foel_tol);
    let beta_sweep = match &system {
        System::Beta { beta, len } => Some((*beta, *len)),
        _ => None,
    };

    // (label, system) pairs to evaluate.
    let mut runs: Vec<(String, System)> = Vec::new();
    let mut seed = None;
    match (&system, args.trials) {
        (System::Beta { beta, len }, None) => {
            for l in 2..=*len {
                runs.push((format!("L={l}"), System::Beta { beta: *beta, len: l }));
            }
        }
        (System::Beta { .. }, Some(_)) => {
            return Err(Failure::Usage("--trials applies to chains and graphs".into()));
        }
        (_, None) => runs.push(("input".into(), system)),
        (_, Some(trials)) => {
            seed = Some(args.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            for t in 0..trials {
                let trial = match &system {
                    System::Chain { spins, .. } => System::Chain {
                        spins: spins.clone(),
                        couplings: random_couplings(&mut rng, spins.len().saturating_sub(1)),
                    },
                    System::Graph(g) => {
                        System::Graph(g.with_couplings(&random_couplings(&mut rng, g.edges().len()))?)
                    }
                    System::Beta { .. } => unreachable!(),
                };
                runs.push((format!("trial={t}"), trial));
            }
        }
    }

    let mut table = sector_table();
    let mut summary = Vec::new();
    for (label, sys) in &runs {
        let (h, shape) = sys.build()?;
        let report = sector_energies_with(&h, &shape, opts)?;
        push_sectors(&mut table, label, &report);
        if !report.foel.ok {
            eprintln!(
                "{label}: FOEL fails ({} crossing(s), {} violation(s), smallest margin {:e})",
                report.foel.crossings.len(),
                report.foel.violations.len(),
                report.foel.min_margin().unwrap_or(f64::NAN)
            );
        }
        summary.push(FoelRun { run: label.clone(), foel: (&report.foel).into() });
    }
    let ok = summary.iter().all(|r| r.foel.foel_ok);
    let note = match (beta_sweep, ok) {
        (Some((beta, len)), true) if beta > 1.0 / 3.0 => {
            let note = format!("no witness at desk scale (L <= {len})");
            eprintln!("{note}");
            Some(note)
        }
        _ => None,
    };
    out.csv("foel.csv", &table)?;
    out.json("summary.json", &FoelReport { command: "foel", foel_ok: ok, seed, runs: summary, note })?;
    Ok(ok)
}

#[derive(Serialize)]
struct PerronSummary {
    value: f64,
    positive: bool,
    simple: bool,
    gap: f64,
}

#[derive(Serialize)]
struct TlSummary {
    command: &'static str,
    k: usize,
    n: usize,
    q: f64,
    dim: usize,
    max_offdiagonal: f64,
    sign_ok: bool,
    dominance_ok: bool,
    dims_ok: bool,
    max_excess: f64,
    irreducible: bool,
    perron: Option<PerronSummary>,
}

pub fn tl_matrix(args: &TlArgs) -> Result<bool, Failure> {
    let out = OutDir::create(&args.out.out)?;
    let mut js = couplings(args.couplings.as_deref(), args.k.saturating_sub(1))?;
    let small = tl_hamiltonian_matrix(args.k, args.n, &js, args.q)?;
    js.push(args.next_coupling);
    let big = tl_hamiltonian_matrix(args.k + 1, args.n, &js, args.q)?;
    let dominance = check_dominance(&small, &big)?;
    let irreducible = small.dim() > 0 && is_irreducible(&small.a);
    let perron = if irreducible {
        let p = perron_ground_vector(&small.a)?;
        Some(PerronSummary { value: p.value, positive: p.positive, simple: p.is_simple(), gap: p.gap })
    } else {
        None
    };
    out.csv("tl_matrix.csv", &small.to_csv())?;
    out.csv("tl_basis.csv", &diagram_basis_csv(&small.basis))?;
    let sign_ok = small.max_offdiagonal() <= 0.0;
    let perron_ok = perron.as_ref().is_none_or(|p| p.positive && p.simple);
    let summary = TlSummary {
        command: "tl-matrix",
        k: args.k,
        n: args.n,
        q: args.q,
        dim: small.dim(),
        max_offdiagonal: small.max_offdiagonal(),
        sign_ok,
        dominance_ok: dominance.ok,
        dims_ok: dominance.dims_ok,
        max_excess: dominance.max_excess,
        irreducible,
        perron,
    };
    out.json("summary.json", &summary)?;
    Ok(sign_ok && dominance.ok && dominance.dims_ok && perron_ok)
}

#[derive(Serialize)]
struct FkSummary {
    command: &'static str,
    s_times2: i64,
    dim: usize,
    gram_condition: f64,
    residual: f64,
    max_offdiagonal: f64,
    sign_ok: bool,
}

pub fn fk_basis(args: &FkArgs) -> Result<bool, Failure> {
    let spins = parse_spins(&args.chain)?;
    let js = couplings(args.couplings.as_deref(), spins.len() - 1)?;
    let out = OutDir::create(&args.out.out)?;
    let s = HalfInt::from_twice(args.twice_spin);
    let m = fk_hamiltonian_matrix(&spins, &js, s)?;

    let mut basis = CsvTable::new(&["id", "downs", "arcs"]);
    for (i, b) in m.basis.iter().enumerate() {
        let downs: Vec<String> = b.blocks.iter().map(|blk| blk.downs.to_string()).collect();
        let arcs: Vec<String> = b.arcs.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        basis.push(vec![Cell::from(i), Cell::Text(downs.join(";")), Cell::Text(arcs.join(";"))]);
    }
    let mut matrix = CsvTable::new(&["row", "col", "value"]);
    for i in 0..m.a.nrows() {
        for j in 0..m.a.ncols() {
            if m.a[(i, j)] != 0.0 {
                matrix.push(vec![Cell::from(i), Cell::from(j), Cell::Float(m.a[(i, j)])]);
            }
        }
    }
    out.csv("fk_basis.csv", &basis)?;
    out.csv("fk_matrix.csv", &matrix)?;
    let sign_ok = m.max_offdiagonal <= 1e-10;
    out.json(
        "summary.json",
        &FkSummary {
            command: "fk-basis",
            s_times2: s.twice(),
            dim: m.basis.len(),
            gram_condition: m.gram_condition,
            residual: m.residual,
            max_offdiagonal: m.max_offdiagonal,
            sign_ok,
        },
    )?;
    Ok(sign_ok)
}

#[derive(Serialize)]
struct QfoelRun {
    len: usize,
    #[serde(flatten)]
    foel: FoelSummary,
}

#[derive(Serialize)]
struct QfoelSummary {
    command: &'static str,
    q: f64,
    delta: f64,
    foel_ok: bool,
    runs: Vec<QfoelRun>,
}

fn qparam(q: Option<f64>, delta: Option<f64>) -> Result<QParam, Failure> {
    Ok(match (q, delta) {
        (Some(q), _) => QParam::from_q(q)?,
        (None, Some(d)) => QParam::from_delta(d)?,
        (None, None) => unreachable!("clap enforces one of --q/--delta"),
    })
}

pub fn qfoel(args: &QfoelArgs) -> Result<bool, Failure> {
    let qp = qparam(args.deformation.q, args.deformation.delta)?;
    let lens: Vec<usize> = parse_list(&args.lens, "--L")?;
    let out = OutDir::create(&args.out.out)?;
    let mut table = CsvTable::new(&["L", "S_times2", "dim", "min_energy", "casimir_value"]);
    let mut runs = Vec::new();
    for &len in &lens {
        let r = q_sector_energies_with_tol(len, qp, args.foel_tol)?;
        for e in &r.entries {
            table.push(vec![
                Cell::from(len),
                Cell::Int(e.spin.twice()),
                Cell::from(e.dim),
                Cell::Float(e.min_energy),
                Cell::Float(e.casimir_value),
            ]);
        }
        if !r.foel.ok {
            eprintln!("L={len}: q-FOEL fails");
        }
        runs.push(QfoelRun { len, foel: (&r.foel).into() });
    }
    let ok = runs.iter().all(|r| r.foel.foel_ok);
    out.csv("qfoel.csv", &table)?;
    out.json("summary.json", &QfoelSummary { command: "qfoel", q: qp.q(), delta: qp.delta(), foel_ok: ok, runs })?;
    Ok(ok)
}

#[derive(Serialize)]
struct DropletCheck {
    n: usize,
    decreasing: bool,
    bounded: bool,
    largest_len_excess: f64,
}

#[derive(Serialize)]
struct DropletSummary {
    command: &'static str,
    q: f64,
    ok: bool,
    droplets: Vec<DropletCheck>,
}

pub fn droplet(args: &DropletArgs) -> Result<bool, Failure> {
    let qp = QParam::from_q(args.q)?;
    let mut lens: Vec<usize> = parse_list(&args.lens, "--L")?;
    let ns: Vec<usize> = parse_list(&args.n, "--n")?;
    lens.sort_unstable();
    lens.dedup();
    let out = OutDir::create(&args.out.out)?;
    let rows = droplet_sweep(&lens, &ns, qp)?;
    let mut checks = Vec::new();
    for &n in &ns {
        let series: Vec<_> = rows.iter().filter(|r| r.n == n).collect();
        let decreasing = series.windows(2).all(|w| w[1].finite_energy < w[0].finite_energy);
        let bounded = series.iter().all(|r| r.finite_energy >= r.infinite_energy - 1e-12);
        let largest_len_excess = series.last().map_or(f64::NAN, |r| r.finite_energy - r.infinite_energy);
        if !(decreasing && bounded) {
            eprintln!("n={n}: droplet energies decreasing={decreasing} bounded={bounded}");
        }
        checks.push(DropletCheck { n, decreasing, bounded, largest_len_excess });
    }
    let ok = checks.iter().all(|c| c.decreasing && c.bounded);
    out.csv("droplet.csv", &droplet_csv(&rows))?;
    out.json("summary.json", &DropletSummary { command: "droplet", q: qp.q(), ok, droplets: checks })?;
    Ok(ok)
}

/// Graph and couplings for the SSEP commands.
fn ssep_graph(args: &GraphArgs) -> Result<(SpinGraph, Vec<f64>), Failure> {
    match (&args.graph, args.len) {
        (Some(path), None) => {
            if args.couplings.is_some() {
                return Err(Failure::Usage("--J applies to --L paths; graph rates come from the file".into()));
            }
            let g = read_graph(path)?;
            let js = g.edges().iter().map(|e| e.coupling).collect();
            Ok((g, js))
        }
        (None, Some(len)) => {
            let js = couplings(args.couplings.as_deref(), len.saturating_sub(1))?;
            Ok((SpinGraph::path(&vec![HalfInt::HALF; len], &js)?, js))
        }
        _ => Err(Failure::Usage("give exactly one of --graph or --L".into())),
    }
}

#[derive(Serialize)]
struct SsepSummary {
    command: &'static str,
    sites: usize,
    lambda1: f64,
    max_relative_deviation: f64,
    aldous_ok: bool,
}

pub fn ssep_gap(args: &GraphArgs) -> Result<bool, Failure> {
    let (g, rates) = ssep_graph(args)?;
    let out = OutDir::create(&args.out.out)?;
    let report = check_aldous(&g, &rates)?;
    out.csv("ssep.csv", &report.to_csv())?;
    out.json(
        "summary.json",
        &SsepSummary {
            command: "ssep-gap",
            sites: g.len(),
            lambda1: report.lambda1,
            max_relative_deviation: report.max_relative_deviation,
            aldous_ok: report.ok,
        },
    )?;
    if !report.ok {
        eprintln!("gap depends on the particle number: relative deviation {:e}", report.max_relative_deviation);
    }
    Ok(report.ok)
}

#[derive(Serialize)]
struct SpinmapSummary {
    command: &'static str,
    sites: usize,
    max_deviation: f64,
    s3_ok: bool,
    max_gap_deviation: f64,
    ok: bool,
}

pub fn spinmap(args: &GraphArgs) -> Result<bool, Failure> {
    let (g, js) = ssep_graph(args)?;
    let out = OutDir::create(&args.out.out)?;
    let verdict = verify_spin_map(&g, &js)?;
    let h = interchange_hamiltonian(&g, &js)?;
    let sites = g.len();
    let blocks = s3_blocks(&HilbertShape::qubits(sites));
    let rates: Vec<f64> = js.iter().map(|j| j / 2.0).collect();
    let mut table = CsvTable::new(&["n", "M_times2", "lambda_n", "block_second_eigenvalue", "deviation"]);
    let mut worst: f64 = 0.0;
    for n in 1..sites {
        let lambda = spectral_gap(&ssep_generator(&g, &rates, n)?)?;
        let m = 2 * n as i64 - sites as i64;
        let idx = &blocks[&m];
        let second = symmetric_eigenvalues(&h.submatrix(idx, idx))[1];
        worst = worst.max((lambda - second).abs());
        table.push(vec![
            Cell::from(n),
            Cell::Int(m),
            Cell::Float(lambda),
            Cell::Float(second),
            Cell::Float((lambda - second).abs()),
        ]);
    }
    let ok = verdict.ok && verdict.s3_ok && worst <= 1e-9;
    out.csv("spinmap.csv", &table)?;
    out.json(
        "summary.json",
        &SpinmapSummary {
            command: "spinmap",
            sites,
            max_deviation: verdict.max_deviation,
            s3_ok: verdict.s3_ok,
            max_gap_deviation: worst,
            ok,
        },
    )?;
    if !ok {
        eprintln!("spin map check failed: entry deviation {:e}, gap deviation {worst:e}", verdict.max_deviation);
    }
    Ok(ok)
}

#[derive(Serialize)]
struct Figure1Summary {
    command: &'static str,
    len: usize,
    ground_offset: f64,
    #[serde(flatten)]
    foel: FoelSummary,
    max_ordering_ok: bool,
}

pub fn figure1(args: &Figure1Args) -> Result<bool, Failure> {
    let out = OutDir::create(&args.out.out)?;
    let spec = ChainSpec::uniform(args.len, HalfInt::ONE)?;
    let h = build_normalized_chain(&spec)?;
    let shape = HilbertShape::from_spins(spec.spins())?;
    let spectrum = full_spectrum_by_s3(&h, &shape, true)?;
    let report = sector_energies_with(&h, &shape, options(args.foel_tol))?;
    let ground_offset = spectrum.iter().flat_map(|(_, v)| v.iter().copied()).fold(f64::INFINITY, f64::min);
    out.csv("figure1.csv", &spectrum_by_s3_csv(&spectrum))?;
    out.csv("sectors.csv", &report.to_csv())?;
    let ok = report.foel.ok && report.max_ordering_ok;
    out.json(
        "summary.json",
        &Figure1Summary {
            command: "figure1",
            len: args.len,
            ground_offset,
            foel: (&report.foel).into(),
            max_ordering_ok: report.max_ordering_ok,
        },
    )?;
    Ok(ok)
}
