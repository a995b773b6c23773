//! Subcommand bodies. Each returns the text it produces so that `main` owns
//! all writing and the output is assembled in grid order.

use serde::Serialize;

use fluctua_core::applications::{aleph, film_tc_renormalized, nu_d, paraconductivity};
use fluctua_core::model::heat_capacity_gaussian;
use fluctua_core::observables::{correlation_length, order_parameter, susceptibility};
use fluctua_core::oracle::{run_oracle_suite, OracleReport};
use fluctua_core::selfconsist::{solve_critical_point, solve_omega};
use fluctua_core::{
    CriticalPoint, Extent, FilmParams, FilmTransition, FluctuationState, Geometry, ModelParams,
    SolverSettings, SuperconductorParams,
};

use crate::config::{Grid, Resolved, RunConfig};
use crate::error::CliError;

/// Observables accepted by `sweep`.
pub const OBSERVABLES: [&str; 7] = ["omega", "theta", "chi", "xi", "heat_capacity", "psi0", "f_T"];

/// CSV text plus per-point problems that left a cell empty.
#[derive(Debug, Default)]
pub struct Table {
    pub csv: String,
    pub warnings: Vec<String>,
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Serialize)]
pub struct CriticalReport {
    #[serde(rename = "Tc")]
    pub tc: f64,
    #[serde(rename = "T_star")]
    pub t_star: f64,
    pub omega_c: f64,
    pub width: f64,
    pub eq30_residual: f64,
    pub nu_d: f64,
    pub iterations: usize,
}

pub fn critical(r: &Resolved, settings: &SolverSettings) -> Result<String, CliError> {
    let cp = solve_critical_point(&r.params, settings)?;
    let report = CriticalReport {
        tc: r.params.tc,
        t_star: cp.t_star,
        omega_c: cp.omega_c,
        width: cp.ginzburg_width,
        eq30_residual: cp.eq30_residual,
        nu_d: nu_d(&cp, &r.params),
        iterations: cp.iterations,
    };
    Ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n")
}

fn require_grid(cfg: &RunConfig) -> Result<Grid, CliError> {
    let grid = cfg
        .grid
        .ok_or_else(|| CliError::validation("a grid is required: pass --grid start,stop,count"))?;
    grid.validate()?;
    Ok(grid)
}

/// Equilibrium state used for ordered-phase observables: re-solved above
/// `T*`, pinned at `Ω_dc` at and below it.
fn phase_state(
    params: &ModelParams,
    cp: &CriticalPoint,
    t: f64,
    settings: &SolverSettings,
) -> fluctua_core::Result<FluctuationState> {
    if t > cp.t_star {
        solve_omega(params, t, settings)
    } else {
        Ok(FluctuationState::frozen(params, cp, t))
    }
}

fn sweep_point(
    observable: &str,
    params: &ModelParams,
    cp: &CriticalPoint,
    t: f64,
    settings: &SolverSettings,
) -> fluctua_core::Result<f64> {
    match observable {
        "omega" => Ok(solve_omega(params, t, settings)?.omega),
        "theta" => solve_omega(params, t, settings)?.theta.ok_or_else(|| {
            fluctua_core::Error::Domain(format!("Θ is undefined at T = {t}"))
        }),
        "chi" => susceptibility(params, t, &solve_omega(params, t, settings)?),
        "heat_capacity" => heat_capacity_gaussian(params, t, &solve_omega(params, t, settings)?),
        "xi" => {
            let state = phase_state(params, cp, t, settings)?;
            correlation_length(params, t, cp, &state, params.xi0, params.xi0)
        }
        "psi0" => Ok(order_parameter(params, t, cp, &phase_state(params, cp, t, settings)?)?.psi0),
        "f_T" => Ok(order_parameter(params, t, cp, &phase_state(params, cp, t, settings)?)?.f_t),
        other => unreachable!("observable {other} was validated"),
    }
}

pub fn sweep(r: &Resolved, cfg: &RunConfig) -> Result<Table, CliError> {
    let observable = cfg
        .observable
        .as_deref()
        .ok_or_else(|| CliError::validation("--observable is required"))?;
    if !OBSERVABLES.contains(&observable) {
        return Err(CliError::validation(format!(
            "unknown observable {observable:?}; expected one of {}",
            OBSERVABLES.join(", ")
        )));
    }
    let grid = require_grid(cfg)?;
    let temps = grid.points();
    if let Some(t) = temps.iter().find(|t| !(**t > 0.0)) {
        return Err(CliError::validation(format!("temperatures must be positive, got {t}")));
    }
    let cp = solve_critical_point(&r.params, &cfg.settings)?;
    let mut table = Table {
        csv: format!("T,{observable}\n"),
        warnings: Vec::new(),
    };
    for t in temps {
        match sweep_point(observable, &r.params, &cp, t, &cfg.settings) {
            Ok(v) if v.is_finite() => table.csv += &format!("{},{}\n", fmt_num(t), fmt_num(v)),
            Ok(v) => {
                table.warnings.push(format!("T={}: non-finite value {v}", fmt_num(t)));
                table.csv += &format!("{},\n", fmt_num(t));
            }
            Err(e) => {
                table.warnings.push(format!("T={}: {e}", fmt_num(t)));
                table.csv += &format!("{},\n", fmt_num(t));
            }
        }
    }
    Ok(table)
}

pub fn film(r: &Resolved, cfg: &RunConfig) -> Result<Table, CliError> {
    let l0s = match (&cfg.l0_values, cfg.grid) {
        (Some(v), _) if !v.is_empty() => v.clone(),
        (Some(_), _) => return Err(CliError::validation("l0_values is empty")),
        (None, Some(_)) => require_grid(cfg)?.points(),
        (None, None) => {
            return Err(CliError::validation(
                "film thicknesses required: pass --grid or give \"l0_values\" in --config",
            ))
        }
    };
    if let Some(l) = l0s.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(CliError::validation(format!("l0 values must be positive and finite, got {l}")));
    }
    let cp = solve_critical_point(&r.params, &cfg.settings)?;
    let mut table = Table {
        csv: "l0,T_star_film\n".into(),
        warnings: Vec::new(),
    };
    for l0 in l0s {
        let fp = FilmParams { l0, base: r.params };
        let cell = match film_tc_renormalized(&fp, &cp) {
            Ok(FilmTransition::At(t)) => fmt_num(t),
            Ok(FilmTransition::NoTransition { .. }) => "NO_TRANSITION".into(),
            Err(e) => {
                table.warnings.push(format!("l0={}: {e}", fmt_num(l0)));
                String::new()
            }
        };
        table.csv += &format!("{},{cell}\n", fmt_num(l0));
    }
    Ok(table)
}

fn default_geometry(dim: u32) -> Geometry {
    match dim {
        3 => Geometry::Bulk,
        2 => Geometry::Film { thickness: 1.0 },
        _ => Geometry::Wire {
            thickness: 1.0,
            width: 1.0,
        },
    }
}

pub fn paracond(r: &Resolved, cfg: &RunConfig) -> Result<Table, CliError> {
    let dim = match cfg.dim {
        Some(d) => d,
        None if [1.0, 2.0, 3.0].contains(&r.params.d) => r.params.d as u32,
        None => return Err(CliError::validation("--dim is required (1, 2 or 3)")),
    };
    if !(1..=3).contains(&dim) {
        return Err(CliError::validation(format!("--dim must be 1, 2 or 3, got {dim}")));
    }
    let base = ModelParams {
        d: dim as f64,
        ..r.params
    };
    let sp = SuperconductorParams {
        constants: r.constants,
        geometry: cfg.geometry.unwrap_or(default_geometry(dim)),
        base,
    };
    sp.validate()?;
    let grid = require_grid(cfg)?;
    let cp = solve_critical_point(&base, &cfg.settings)?;
    let temps = grid.points();
    if let Some(t) = temps.iter().find(|t| !(**t > cp.t_star)) {
        return Err(CliError::validation(format!(
            "grid point T = {} is not above T*_c = {}; paraconductivity needs T > T*_c",
            fmt_num(*t),
            fmt_num(cp.t_star)
        )));
    }
    let aleph_d = aleph(dim as f64, Extent::Infinite)?;
    let mut table = Table {
        csv: format!("# aleph_{dim} = {}\nepsilon_star,sigma\n", fmt_num(aleph_d)),
        warnings: Vec::new(),
    };
    for t in temps {
        let eps = (t - cp.t_star) / base.tc;
        let sigma = solve_omega(&base, t, &cfg.settings)
            .and_then(|state| paraconductivity(&sp, t, &state, &cp));
        match sigma {
            Ok(s) => table.csv += &format!("{},{}\n", fmt_num(eps), fmt_num(s)),
            Err(e) => {
                table.warnings.push(format!("T={}: {e}", fmt_num(t)));
                table.csv += &format!("{},\n", fmt_num(eps));
            }
        }
    }
    Ok(table)
}

pub fn oracle(cfg: &RunConfig) -> Result<(String, OracleReport), CliError> {
    let report = run_oracle_suite(&cfg.oracle)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    Ok((text, report))
}

pub fn presets_list() -> Result<String, CliError> {
    let mut out = String::new();
    for name in fluctua_core::presets::list()? {
        match fluctua_core::presets::load(&name) {
            Ok(p) => out += &format!("{name}\t{}\t{}\n", fmt_num(p.target_width), p.description),
            Err(e) => out += &format!("{name}\tinvalid: {e}\n"),
        }
    }
    Ok(out)
}
