//! Implementations of the CLI subcommands.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;

use lssd_core::classical::{
    optimal_classical_exhaustive_with_budget, optimal_classical_symmetric, DEFAULT_ENUM_BUDGET,
};
use lssd_core::codes::{
    ball_list_code, code_min_success_mc, code_min_success_with_budget, code_strategy_win_prob,
    hamming_7_4, identity_code, list_strategy_win_prob, repetition_code, Code,
};
use lssd_core::exponent::{bsc_exponent_closed_form, finite_n_exponent_table, optimize_exponent};
use lssd_core::game::{bsc_channel, bsc_game, AnyGame, GameTable, DEFAULT_TABLE_BUDGET};
use lssd_core::nosig::{optimal_ns, optimal_ns_repeated, BehaviorShape};
use lssd_core::npa::{build_1mn, solve_sdp, MomentSdp, SdpBound};
use lssd_core::polytope::{gap_report_for, ns_polytope_vertices, AdjacencyTest};
use lssd_core::scalar::{Rational, Scalar};
use lssd_core::{Behavior, DeterministicStrategy, Error};

use crate::grid::{parse_decimal_or_fraction, AlphaGrid};
use crate::Command;

pub struct CliError {
    pub message: String,
    pub kind: &'static str,
    pub exit_code: u8,
}

fn input_error(message: impl Into<String>) -> CliError {
    CliError {
        message: message.into(),
        kind: "input",
        exit_code: 2,
    }
}

fn compute_error(message: impl Into<String>) -> CliError {
    CliError {
        message: message.into(),
        kind: "computation",
        exit_code: 1,
    }
}

fn as_input<T>(r: Result<T, Error>) -> Result<T, CliError> {
    r.map_err(|e| input_error(e.to_string()))
}

fn as_compute<T>(r: Result<T, Error>) -> Result<T, CliError> {
    r.map_err(|e| compute_error(e.to_string()))
}

pub fn run(command: Command, seed: u64) -> Result<(), CliError> {
    match command {
        Command::Solve {
            game,
            modes,
            budget,
            tol,
            dump_behavior,
            out,
        } => cmd_solve(
            &game,
            &modes,
            budget,
            tol,
            dump_behavior.as_deref(),
            out.as_deref(),
        ),
        Command::Sweep {
            alpha_grid,
            copies,
            scalar,
            modes,
            tol,
            out,
        } => cmd_sweep(
            &alpha_grid,
            copies,
            &scalar,
            modes.as_deref(),
            tol,
            out.as_deref(),
        ),
        Command::Gap3 { dump_vertices, out } => cmd_gap3(dump_vertices.as_deref(), out.as_deref()),
        Command::Vertices {
            x_size,
            inputs,
            dump_vertices,
        } => cmd_vertices(x_size, &inputs, dump_vertices.as_deref()),
        Command::Exponent {
            n_list,
            alpha_grid,
            check_limit,
            out,
        } => cmd_exponent(&n_list, &alpha_grid, check_limit, seed, out.as_deref()),
        Command::Npa {
            game,
            alpha,
            copies,
            tol,
            dump_sdp,
            out,
        } => cmd_npa(
            game.as_deref(),
            alpha.as_deref(),
            copies,
            tol,
            dump_sdp.as_deref(),
            out.as_deref(),
        ),
        Command::Codes {
            builtin,
            code,
            alpha_grid,
            budget,
            mc,
            out,
        } => cmd_codes(
            builtin.as_deref(),
            code.as_deref(),
            &alpha_grid,
            budget,
            mc,
            seed,
            out.as_deref(),
        ),
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| input_error(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn strategy_label(strategy: &DeterministicStrategy, x_size: usize) -> String {
    let symmetric = strategy.tables.windows(2).all(|w| w[0] == w[1]);
    let table = &strategy.tables[0];
    let body = if table.iter().enumerate().all(|(a, &x)| a == x) && table.len() == x_size {
        "identity".to_string()
    } else if let Some(&c) = table
        .first()
        .filter(|_| table.iter().all(|x| x == table.first().unwrap()))
    {
        format!("constant{c}")
    } else {
        let digits: Vec<String> = table.iter().map(|x| x.to_string()).collect();
        format!("f=[{}]", digits.join(","))
    };
    if symmetric {
        body
    } else {
        format!("asymmetric:{body}")
    }
}

fn rational_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

// ---------------------------------------------------------------------------
// solve

fn cmd_solve(
    game_path: &Path,
    modes: &str,
    budget: Option<u128>,
    tol: f64,
    dump_behavior: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let modes = parse_modes(modes)?;
    let loaded = as_input(AnyGame::load(game_path))?;
    let mut report = serde_json::Map::new();
    report.insert(
        "game".into(),
        serde_json::json!(game_path.display().to_string()),
    );

    match &loaded {
        AnyGame::Rational(g) => {
            report.insert("scalar".into(), "rational".into());
            solve_into(&mut report, g, &modes, budget, tol, true, dump_behavior)?;
        }
        AnyGame::Float(g) => {
            report.insert("scalar".into(), "float".into());
            solve_into(&mut report, g, &modes, budget, tol, false, dump_behavior)?;
        }
    }
    let body = serde_json::Value::Object(report).to_string();
    emit(out, &format!("{body}\n"))
}

fn solve_into<S: Scalar>(
    report: &mut serde_json::Map<String, serde_json::Value>,
    game: &GameTable<S>,
    modes: &[Mode],
    budget: Option<u128>,
    tol: f64,
    exact: bool,
    dump_behavior: Option<&Path>,
) -> Result<(), CliError> {
    for mode in modes {
        match mode {
            Mode::Classical => {
                let budget = budget.unwrap_or(DEFAULT_ENUM_BUDGET);
                // Prefer the symmetric search when its hypotheses hold.
                let (value, strategy, method) = match optimal_classical_symmetric(game) {
                    Ok((v, s)) => (v, s, "symmetric"),
                    Err(Error::Hypothesis(_)) => {
                        let (v, s) =
                            as_compute(optimal_classical_exhaustive_with_budget(game, budget))?;
                        (v, s, "exhaustive")
                    }
                    Err(e) => return Err(compute_error(e.to_string())),
                };
                report.insert(
                    "classical".into(),
                    serde_json::json!({
                        "value": value.to_f64(),
                        "value_exact": exact.then(|| rational_str(&value.to_lp_rational())),
                        "strategy": strategy.tables,
                        "label": strategy_label(&strategy, game.x_size()),
                        "method": method,
                    }),
                );
            }
            Mode::Ns => {
                let (value, behavior) = as_compute(optimal_ns(game))?;
                if let Some(path) = dump_behavior {
                    as_input(behavior.save(path))?;
                }
                report.insert(
                    "ns".into(),
                    serde_json::json!({
                        "value": value.to_f64(),
                        "value_exact": exact.then(|| rational_str(&value.to_lp_rational())),
                    }),
                );
            }
            Mode::Npa => {
                let sdp = as_input(build_1mn(game))?;
                let bound = as_compute(solve_sdp(&sdp, tol))?;
                report.insert("npa".into(), npa_json(&sdp, &bound));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Classical,
    Ns,
    Npa,
}

fn parse_modes(text: &str) -> Result<Vec<Mode>, CliError> {
    text.split(',')
        .map(|m| match m.trim() {
            "classical" => Ok(Mode::Classical),
            "ns" => Ok(Mode::Ns),
            "npa" => Ok(Mode::Npa),
            other => Err(input_error(format!("unknown mode {other:?}"))),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// sweep

fn cmd_sweep(
    alpha_grid: &str,
    copies: usize,
    scalar: &str,
    modes: Option<&str>,
    tol: f64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let grid = AlphaGrid::parse(alpha_grid).map_err(input_error)?;
    if copies == 0 {
        return Err(input_error("copies must be at least 1"));
    }
    let modes = match modes {
        Some(m) => parse_modes(m)?,
        None if copies <= 2 => vec![Mode::Classical, Mode::Ns],
        None => vec![Mode::Ns],
    };
    let exact = match scalar {
        "rational" => true,
        "float" => false,
        other => return Err(input_error(format!("unknown scalar backend {other:?}"))),
    };

    let alphas = grid.values();
    let rows: Vec<String> = alphas
        .par_iter()
        .map(|alpha| {
            let result = if exact {
                sweep_point(alpha.clone(), copies, &modes, tol)
            } else {
                sweep_point(alpha.to_f64(), copies, &modes, tol)
            };
            match result {
                Ok(r) => r,
                Err(msg) => format!(
                    "{},{copies},NaN,NaN,NaN,,{}",
                    alpha.to_f64(),
                    msg.replace(',', ";")
                ),
            }
        })
        .collect();

    let mut csv = String::from("alpha,n,w_classical,w_ns,w_npa,classical_strategy,error\n");
    for row in rows {
        let _ = writeln!(csv, "{row}");
    }
    emit(out, &csv)
}

fn sweep_point<S: Scalar>(
    alpha: S,
    copies: usize,
    modes: &[Mode],
    tol: f64,
) -> Result<String, String> {
    let base = bsc_game(alpha.clone(), 2, 1).map_err(|e| e.to_string())?;
    let mut w_classical = String::from("");
    let mut w_ns = String::from("");
    let mut w_npa = String::from("");
    let mut label = String::new();

    for mode in modes {
        match mode {
            Mode::Classical => {
                let game = base
                    .parallel_repetition(copies)
                    .map_err(|e| e.to_string())?;
                let (v, s) = optimal_classical_symmetric(&game).map_err(|e| e.to_string())?;
                w_classical = format!("{}", v.to_f64());
                label = strategy_label(&s, game.x_size());
            }
            Mode::Ns => {
                let (v, _) = optimal_ns_repeated(&base, copies).map_err(|e| e.to_string())?;
                w_ns = format!("{}", v.to_f64());
            }
            Mode::Npa => {
                let game = base
                    .parallel_repetition(copies)
                    .map_err(|e| e.to_string())?;
                let sdp = build_1mn(&game).map_err(|e| e.to_string())?;
                let bound = solve_sdp(&sdp, tol).map_err(|e| e.to_string())?;
                if !bound.converged {
                    return Err(format!(
                        "sdp stalled at residual {:.2e}",
                        bound.primal_residual.max(bound.dual_residual)
                    ));
                }
                w_npa = format!("{}", bound.upper_bound);
            }
        }
    }
    Ok(format!(
        "{},{copies},{w_classical},{w_ns},{w_npa},{label},",
        alpha.to_f64()
    ))
}

// ---------------------------------------------------------------------------
// gap3

fn cmd_gap3(dump_vertices: Option<&Path>, out: Option<&Path>) -> Result<(), CliError> {
    let started = Instant::now();
    let shape = BehaviorShape {
        x_size: 2,
        input_sizes: vec![2, 2, 2],
    };
    let vertices = as_compute(ns_polytope_vertices(&shape, AdjacencyTest::Rank))?;
    let enumeration_seconds = started.elapsed().as_secs_f64();
    if let Some(path) = dump_vertices {
        dump_vertex_file(path, &vertices)?;
    }
    let lp_started = Instant::now();
    let report = as_compute(gap_report_for(&shape, &vertices))?;
    let max_per_vertex = report
        .per_vertex_gaps
        .iter()
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero);
    let body = serde_json::json!({
        "vertices": report.vertex_count,
        "filtered": report.filtered_count,
        "per_vertex_max_gap": rational_str(&max_per_vertex),
        "all_nonpositive": report.per_vertex_gaps.iter().all(|g| *g <= Rational::zero()),
        "gap": rational_str(&report.max_gap),
        "worst_game": report.worst_game.to_json(),
        "enumeration_seconds": enumeration_seconds,
        "gap_lp_seconds": lp_started.elapsed().as_secs_f64(),
    });
    emit(out, &format!("{body}\n"))
}

fn dump_vertex_file(path: &Path, vertices: &[Behavior<Rational>]) -> Result<(), CliError> {
    let rows: Vec<Vec<String>> = vertices
        .iter()
        .map(|b| b.cond().iter().map(rational_str).collect())
        .collect();
    fs::write(path, serde_json::to_string(&rows).expect("serializable"))
        .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// vertices

fn cmd_vertices(x_size: usize, inputs: &str, dump_vertices: Option<&Path>) -> Result<(), CliError> {
    let input_sizes: Vec<usize> = inputs
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|e| input_error(format!("bad input size {s:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if x_size < 2 || input_sizes.is_empty() {
        return Err(input_error("need x_size >= 2 and at least one party"));
    }
    let shape = BehaviorShape {
        x_size,
        input_sizes,
    };
    let started = Instant::now();
    let vertices = as_compute(ns_polytope_vertices(&shape, AdjacencyTest::Rank))?;
    let deterministic = vertices
        .iter()
        .filter(|b| {
            b.cond()
                .iter()
                .all(|q| q.is_zero() || *q == Rational::new(1.into(), 1.into()))
        })
        .count();
    if let Some(path) = dump_vertices {
        dump_vertex_file(path, &vertices)?;
    }
    println!(
        "{}",
        serde_json::json!({
            "vertices": vertices.len(),
            "deterministic": deterministic,
            "seconds": started.elapsed().as_secs_f64(),
        })
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// exponent

fn cmd_exponent(
    n_list: &str,
    alpha_grid: &str,
    check_limit: bool,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let ns: Vec<usize> = n_list
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|e| input_error(format!("bad block length {s:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    let grid = AlphaGrid::parse(alpha_grid).map_err(input_error)?;
    let alphas = grid.float_values();
    let rows = as_input(finite_n_exponent_table(&ns, &alphas))?;

    if check_limit {
        // The closed form should agree with the direct maximization.
        let worst = alphas
            .par_iter()
            .map(|&alpha| {
                let ch = bsc_channel(alpha)?;
                let (v, _) = optimize_exponent(&ch, seed)?;
                Ok((v - bsc_exponent_closed_form(alpha)?).abs())
            })
            .collect::<Result<Vec<f64>, Error>>();
        let worst = as_compute(worst)?.into_iter().fold(0.0f64, f64::max);
        if worst > 1e-6 {
            return Err(compute_error(format!(
                "optimizer disagrees with the closed-form limit by {worst:.2e}"
            )));
        }
        eprintln!("limit check: max |optimizer - closed form| = {worst:.2e}");
    }

    let mut csv = String::from("n,alpha,best_d,log_w_over_n,limit\n");
    for row in rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            row.n, row.alpha, row.best_d, row.log_w_over_n, row.limit
        );
    }
    emit(out, &csv)
}

// ---------------------------------------------------------------------------
// npa

fn npa_json(sdp: &MomentSdp, bound: &SdpBound) -> serde_json::Value {
    serde_json::json!({
        "upper_bound": bound.upper_bound,
        "objective": bound.objective,
        "margin": bound.margin,
        "primal_residual": bound.primal_residual,
        "dual_residual": bound.dual_residual,
        "iterations": bound.iterations,
        "converged": bound.converged,
        "dimension": sdp.dimension(),
        "reduced_dimension": sdp.reduced_dimension(),
    })
}

fn cmd_npa(
    game: Option<&Path>,
    alpha: Option<&str>,
    copies: usize,
    tol: f64,
    dump_sdp: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let sdp = match (game, alpha) {
        (Some(path), None) => match as_input(AnyGame::load(path))? {
            AnyGame::Rational(g) => as_input(build_1mn(&g))?,
            AnyGame::Float(g) => as_input(build_1mn(&g))?,
        },
        (None, Some(text)) => {
            let alpha = parse_decimal_or_fraction(text).map_err(input_error)?;
            let g = as_input(bsc_game(alpha, 2, copies))?;
            as_input(build_1mn(&g))?
        }
        _ => return Err(input_error("pass exactly one of --game or --alpha")),
    };
    if let Some(path) = dump_sdp {
        fs::write(path, sdp.dump())
            .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
    }
    let bound = as_compute(solve_sdp(&sdp, tol))?;
    let body = npa_json(&sdp, &bound);
    emit(out, &format!("{body}\n"))
}

// ---------------------------------------------------------------------------
// codes

fn cmd_codes(
    builtin: Option<&str>,
    code_path: Option<&Path>,
    alpha_grid: &str,
    budget: Option<u128>,
    mc: bool,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let (code, name) = match (builtin, code_path) {
        (Some(spec), None) => (parse_builtin(spec)?, spec.to_string()),
        (None, Some(path)) => (as_input(Code::load(path))?, path.display().to_string()),
        _ => return Err(input_error("pass exactly one of --builtin or --code")),
    };
    let grid = AlphaGrid::parse(alpha_grid).map_err(input_error)?;
    let budget = budget.unwrap_or(DEFAULT_TABLE_BUDGET);

    let mut csv = String::from("alpha,code,n,messages,list_size,min_success,win_prob,error\n");
    for alpha in grid.float_values() {
        let ch = match bsc_channel(alpha) {
            Ok(ch) => ch,
            Err(e) => {
                let _ = writeln!(csv, "{alpha},{name},,,,NaN,NaN,{e}");
                continue;
            }
        };
        let min_success = match code_min_success_with_budget(&code, &ch, budget) {
            Ok(v) => Ok(v),
            Err(Error::Budget { .. }) if mc => code_min_success_mc(&code, &ch, 100_000, seed),
            Err(e) => Err(e),
        };
        let win = if code.list_size() == 1 {
            code_strategy_win_prob(&code, &ch)
        } else {
            list_strategy_win_prob(&code, &ch)
        };
        match (min_success, win) {
            (Ok(ms), Ok(w)) => {
                let _ = writeln!(
                    csv,
                    "{alpha},{name},{},{},{},{ms},{w},",
                    code.block_length(),
                    code.message_count(),
                    code.list_size()
                );
            }
            (ms, w) => {
                let err = ms
                    .err()
                    .or(w.err())
                    .map(|e| e.to_string())
                    .unwrap_or_default();
                let _ = writeln!(csv, "{alpha},{name},,,,NaN,NaN,{}", err.replace(',', ";"));
            }
        }
    }
    emit(out, &csv)
}

fn parse_builtin(spec: &str) -> Result<Code, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse_n = |s: &str| -> Result<usize, CliError> {
        s.parse()
            .map_err(|e| input_error(format!("bad block length {s:?}: {e}")))
    };
    match parts.as_slice() {
        ["hamming7"] => Ok(hamming_7_4()),
        ["repetition", n] => as_input(repetition_code(parse_n(n)?)),
        ["identity", n] => as_input(identity_code(parse_n(n)?)),
        ["ball", n, d] => as_input(ball_list_code(parse_n(n)?, parse_n(d)?)),
        _ => Err(input_error(format!(
            "unknown builtin {spec:?} (use hamming7, repetition:N, identity:N or ball:N:D)"
        ))),
    }
}
