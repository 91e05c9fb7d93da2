//! Command execution: every subcommand turns into one or more sheets.

use envelope_core::et::{calibrate_phi, dos_phi, solve_state, BoundCharacter, EtSolution};
use envelope_core::model::{quantum_numbers, SystemSpec};
use envelope_core::observables::{observable_approx, observable_rk};
use envelope_core::oracle::{solve_oracle, OracleConfig, OracleSolution};
use envelope_core::oscillator::{symmetrize, CoupledBasisState, SymmetrizedState};

use crate::config::{PhiMode, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::{Sheet, Value};
use crate::tables::{hierarchy, rel_err_pct, reproduce_table, OracleOptions, TableReport, TABLE_IDS};

#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub qstar_max: Option<u32>,
    pub quad_order: Option<usize>,
}

fn quantity_sheet() -> Sheet {
    Sheet::new(&[("quantity", true), ("value", true)])
}

fn put(s: &mut Sheet, name: &str, v: Value) {
    s.push(vec![Value::Text(name.to_string()), v]);
}

fn character_tag(c: BoundCharacter) -> &'static str {
    match c {
        BoundCharacter::UpperBound => "upper",
        BoundCharacter::LowerBound => "lower",
        BoundCharacter::Unknown => "unknown",
    }
}

fn resolve_phi(cfg: &RunConfig, system: &SystemSpec) -> CliResult<f64> {
    Ok(match cfg.phi {
        PhiMode::Fixed(p) => p,
        PhiMode::Dos => dos_phi(system, &cfg.state)?,
        PhiMode::Calibrate(e) => calibrate_phi(system, &cfg.state, e)?,
    })
}

/// Three-body systems with one K=3 term admit oscillator wavefunctions and the oracle.
fn is_three_body(cfg: &RunConfig) -> bool {
    cfg.n == 3 && cfg.d == 3 && cfg.k == 3
}

/// Symmetric state of the configured band carrying the configured coupled component.
fn envelope_wavefunction(cfg: &RunConfig) -> CliResult<Option<SymmetrizedState>> {
    let qn = quantum_numbers(&cfg.state, cfg.d);
    let states = symmetrize(qn.qstar, cfg.state.l_total, cfg.state.sigma)?;
    let [(n1, l1), (n2, l2)] = [cfg.state.quanta[0], cfg.state.quanta[1]];
    let target = Some(CoupledBasisState::new(n1, l1, n2, l2, cfg.state.l_total));
    let pick = target
        .and_then(|t| states.iter().find(|s| s.coefficient(&t).abs() > 1e-12).cloned())
        .or_else(|| states.first().cloned());
    Ok(pick)
}

fn oracle_config(cfg: &RunConfig, ov: &Overrides) -> OracleConfig {
    let qn = quantum_numbers(&cfg.state, cfg.d);
    let mut c = OracleConfig::new(cfg.state.l_total, qn.parity, cfg.state.sigma)
        .with_level(cfg.oracle.level)
        .with_quad_order(ov.quad_order.unwrap_or(cfg.oracle.quad_order))
        .with_z_search(cfg.oracle.z_search_qstar);
    if let Some(q) = ov.qstar_max.or(cfg.oracle.qstar_max) {
        let q = if (q % 2 == 0) == (qn.parity > 0) { q } else { q.saturating_sub(1) };
        c = c.with_qstar_max(q);
    }
    c
}

fn run_oracle(cfg: &RunConfig, ov: &Overrides) -> CliResult<(OracleConfig, OracleSolution)> {
    if !is_three_body(cfg) {
        return Err(CliError::Config("the oracle handles N = 3, D = 3 with a K = 3 force only".into()));
    }
    let oc = oracle_config(cfg, ov);
    let sol = solve_oracle(&cfg.system()?, &oc)?;
    Ok((oc, sol))
}

fn et_section(s: &mut Sheet, sol: &EtSolution, phi: f64) {
    put(s, "phi", Value::Num(phi));
    put(s, "q_eff", Value::Num(sol.q_eff));
    put(s, "e", Value::Num(sol.e));
    put(s, "rho0", Value::Num(sol.rho0));
    put(s, "p0", Value::Num(sol.p0));
    put(s, "character", Value::Text(character_tag(sol.character).into()));
    put(s, "multiple_roots", Value::Text(sol.multiple_roots.to_string()));
}

pub fn solve(cfg: &RunConfig, ov: &Overrides) -> CliResult<Sheet> {
    let system = cfg.system()?;
    let phi = resolve_phi(cfg, &system)?;
    let sol = solve_state(&system, &cfg.state, phi)?;
    let mut s = quantity_sheet();
    et_section(&mut s, &sol, phi);
    if cfg.observables && is_three_body(cfg) {
        match envelope_wavefunction(cfg)? {
            Some(wf) => {
                let wf = wf.scaled(sol.q_eff, sol.rho0, phi);
                for (name, k) in [("r", 1.0), ("r2", 2.0), ("rinv", -1.0)] {
                    put(&mut s, name, Value::Num(observable_rk(&wf, k)?));
                }
            }
            None => put(&mut s, "r", Value::Marker("forbidden")),
        }
        put(&mut s, "rho0_sq", Value::Num(observable_approx(sol.rho0, 2.0)));
        put(&mut s, "rho0_inv", Value::Num(observable_approx(sol.rho0, -1.0)));
    }
    if cfg.oracle.enabled {
        let (oc, acc) = run_oracle(cfg, ov)?;
        put(&mut s, "e_acc", Value::Num(acc.e));
        put(&mut s, "e_err_pct", Value::Num(rel_err_pct(sol.e, acc.e)));
        oracle_section(&mut s, &oc, &acc)?;
    }
    Ok(s)
}

fn oracle_section(s: &mut Sheet, oc: &OracleConfig, acc: &OracleSolution) -> CliResult<()> {
    put(s, "z", Value::Num(acc.z_opt));
    put(s, "nu", Value::Num(acc.nu));
    put(s, "qstar_max", Value::Int(oc.qstar_max as i64));
    put(s, "basis_size", Value::Int(acc.basis_size as i64));
    put(s, "dominant_band", Value::Int(acc.dominant_band as i64));
    match acc.truncation_delta {
        Some(d) => put(s, "truncation_delta", Value::Num(d)),
        None => put(s, "truncation_delta", Value::Marker("n/a")),
    }
    for (q, w) in &acc.band_weights {
        put(s, &format!("band_weight_{q}"), Value::Num(*w));
    }
    Ok(())
}

pub fn oracle(cfg: &RunConfig, ov: &Overrides) -> CliResult<Sheet> {
    let (oc, acc) = run_oracle(cfg, ov)?;
    let mut s = quantity_sheet();
    put(&mut s, "e_acc", Value::Num(acc.e));
    put(&mut s, "level", Value::Int(acc.level as i64));
    oracle_section(&mut s, &oc, &acc)?;
    for (name, k) in [("r", 1.0), ("r2", 2.0), ("rinv", -1.0)] {
        put(&mut s, name, Value::Num(acc.moment(k)?));
    }
    Ok(s)
}

pub fn phi_dos(cfg: &RunConfig) -> CliResult<Sheet> {
    let mut s = quantity_sheet();
    put(&mut s, "phi_dos", Value::Num(dos_phi(&cfg.system()?, &cfg.state)?));
    Ok(s)
}

/// Target energy from `phi = calibrate:E`, else from the oracle when enabled.
pub fn calibrate(cfg: &RunConfig, ov: &Overrides) -> CliResult<Sheet> {
    let system = cfg.system()?;
    let target = match cfg.phi {
        PhiMode::Calibrate(e) => e,
        _ if cfg.oracle.enabled => run_oracle(cfg, ov)?.1.e,
        _ => {
            return Err(CliError::Config(
                "calibrate-phi needs `phi = calibrate:<E>` or an enabled oracle".into(),
            ))
        }
    };
    let phi = calibrate_phi(&system, &cfg.state, target)?;
    let mut s = quantity_sheet();
    put(&mut s, "e_target", Value::Num(target));
    put(&mut s, "phi", Value::Num(phi));
    Ok(s)
}

pub const TABLE_COLUMNS: [(&str, bool); 24] = [
    ("table", false),
    ("state", false),
    ("row", false),
    ("phi", true),
    ("e", true),
    ("e_err_pct", true),
    ("r", true),
    ("r_err_pct", true),
    ("rho0", true),
    ("rho0_err_pct", true),
    ("r2", true),
    ("r2_err_pct", true),
    ("rho0_sq", true),
    ("rho0_sq_err_pct", true),
    ("rinv", true),
    ("rinv_err_pct", true),
    ("rho0_inv", true),
    ("rho0_inv_err_pct", true),
    ("e_acc", false),
    ("nu", false),
    ("band_weight", false),
    ("z", false),
    ("qstar_max", false),
    ("phi_fit", false),
];

const MIXED: &str = "MixedQ0";

fn pair(x: Option<f64>, acc: f64) -> [Value; 2] {
    match x {
        Some(v) => [Value::Num(v), Value::Num(rel_err_pct(v, acc))],
        None => [Value::Marker(MIXED), Value::Marker(MIXED)],
    }
}

pub fn table_sheet(rep: &TableReport) -> Sheet {
    let mut s = Sheet::new(&TABLE_COLUMNS);
    let a = &rep.accurate;
    for row in &rep.rows {
        let phi_label = match row.kind {
            crate::tables::PhiKind::Plain => "2".to_string(),
            k => format!("{} ({})", crate::report::fmt_sig(row.phi, 4), k.tag()),
        };
        let mut v = vec![
            Value::Text(rep.spec.id.into()),
            Value::Text(rep.spec.label.into()),
            Value::Text(row.kind.tag().into()),
            Value::Text(phi_label),
        ];
        v.extend(pair(Some(row.e), a.e));
        v.extend(pair(row.r, a.r));
        v.extend(pair(Some(row.rho0), a.r));
        v.extend(pair(row.r2, a.r2));
        v.extend(pair(Some(row.rho0_sq()), a.r2));
        v.extend(pair(row.rinv, a.rinv));
        v.extend(pair(Some(row.rho0_inv()), a.rinv));
        v.push(Value::Num(a.e));
        v.push(Value::Num(a.nu));
        v.push(Value::Num(a.band_weight));
        v.push(Value::Num(a.z));
        v.push(Value::Int(a.qstar_max as i64));
        v.push(rep.phi_fit.map_or(Value::Marker("n/a"), Value::Num));
        s.push(v);
    }
    let band = rep.spec.band();
    s.caption.push(format!(
        "{} {} ({} potential): E_acc = {}, nu = {:.2}, sum d(Q*={band})^2 = {:.3}, z = {:.4}, Q*max = {}",
        rep.spec.id,
        rep.spec.label,
        rep.spec.system.name(),
        crate::report::fmt_sig(a.e, 4),
        a.nu,
        a.band_weight,
        a.z,
        a.qstar_max
    ));
    if let Some(p) = rep.phi_fit {
        s.caption.push(format!("phi reproducing E_acc for this state: {p:.4}"));
    }
    if rep.rows.iter().any(|r| r.r.is_none()) {
        s.caption.push(format!("{MIXED}: moments undefined for modified phi on mixed orbital content"));
    }
    s
}

pub fn table_ids(id: &str) -> CliResult<Vec<&'static str>> {
    if id == "all" {
        return Ok(TABLE_IDS.to_vec());
    }
    TABLE_IDS
        .iter()
        .find(|t| **t == id)
        .map(|t| vec![*t])
        .ok_or_else(|| CliError::Config(format!("unknown table `{id}` (expected lin1..lin5, coul1..coul3, gauss1..gauss3 or all)")))
}

pub fn tables(ids: &[&str], ov: &Overrides) -> CliResult<Vec<TableReport>> {
    let opts = OracleOptions { qstar_max: ov.qstar_max, quad_order: ov.quad_order.unwrap_or(80) };
    ids.iter().map(|id| reproduce_table(id, &opts)).collect()
}

pub fn hierarchy_lines(reports: &[TableReport]) -> Vec<String> {
    let lin: Vec<TableReport> = reports.iter().filter(|r| r.spec.id.starts_with("lin")).cloned().collect();
    if lin.len() < 2 {
        return Vec::new();
    }
    let h = hierarchy(&lin);
    let mut out = vec!["linear spectrum hierarchy (phi_GS envelope vs oracle):".to_string()];
    for i in 0..h.labels.len() {
        out.push(format!("  {}  {:.4}  {:.4}", h.labels[i], h.et[i], h.oracle[i]));
    }
    out.push(format!("  ordering {}", if h.consistent { "consistent" } else { "INCONSISTENT" }));
    out
}
