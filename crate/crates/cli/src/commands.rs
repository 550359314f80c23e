use regret_core::allais::{self, AllaisMenu, ChoicePattern, Condition, ZetaResult};
use regret_core::audit::{self, AuditStatus, Check, Property};
use regret_core::dominance::{stochastic_dominance, DominanceVerdict};
use regret_core::kernel::Kernel;
use regret_core::regret::{prefer, Preference};
use regret_core::savage::{self, OmeletParams};
use regret_core::{statewise_coupling, Coupling, RegretKernel, Verdict};
use serde::Serialize;

use crate::io::{
    parse_kernel, parse_utility, read_fixture, read_joint, read_lottery, write_fixture, write_text,
    Fixture,
};
use crate::output::{float, to_json};
use crate::{
    AuditArgs, ClassifyArgs, CliError, CompareArgs, CouplingArg, DominanceArgs, Outcome,
    ReplayArgs, SavageArgs, ScanArgs, ZetaArgs, EXIT_INCONCLUSIVE, EXIT_VIOLATION,
};

#[derive(Serialize)]
struct CompareReport {
    direction: Preference,
    regret_difference: f64,
    scale: f64,
    kernel: String,
    utility: String,
    coupling: String,
}

pub(crate) fn compare(a: &CompareArgs) -> Result<Outcome, CliError> {
    let kernel = parse_kernel(&a.kernel)?;
    let u = parse_utility(&a.utility)?;
    let x = read_lottery(&a.first)?;
    let y = read_lottery(&a.second)?;
    let (verdict, coupling) = match (&a.joint, a.coupling) {
        (Some(path), _) => {
            let j = read_joint(path)?;
            (prefer(&x, &y, &kernel, &u, Coupling::Joint(&j))?, "joint")
        }
        (None, CouplingArg::Diagonal) => {
            let j = statewise_coupling(&x, &y)?;
            (
                prefer(&x, &y, &kernel, &u, Coupling::Joint(&j))?,
                "diagonal",
            )
        }
        (None, CouplingArg::Independent) => (
            prefer(&x, &y, &kernel, &u, Coupling::Independent)?,
            "independent",
        ),
    };
    Ok(Outcome::ok(to_json(&CompareReport {
        direction: verdict.direction,
        regret_difference: verdict.regret_difference,
        scale: verdict.scale,
        kernel: kernel.to_string(),
        utility: u.to_string(),
        coupling: coupling.into(),
    })))
}

#[derive(Serialize)]
struct ClassifyReport {
    beta: f64,
    gamma: f64,
    scale: f64,
    shift: f64,
    pattern: Option<&'static str>,
    paradoxical: Option<bool>,
    boundary: bool,
    /// `0.01 g(u0 - u1) + 0.1 g(u5 - u1)`, negative when I is chosen over II.
    first_choice: Condition,
    /// `0.089 g(u5 - u0) - 0.099 g(u1 - u0) + 0.011 g(u5 - u1)`, positive when IV is chosen over III.
    second_choice: Condition,
}

pub(crate) fn classify(a: &ClassifyArgs) -> Result<Outcome, CliError> {
    let kernel = RegretKernel::sinh(a.beta)?;
    let u = regret_core::UtilityCurve::log(a.gamma)?;
    let menu: AllaisMenu = allais::allais_menu(a.scale, a.shift)?;
    let c: ChoicePattern = allais::classify(&menu, &kernel, &u)?;
    Ok(Outcome::ok(to_json(&ClassifyReport {
        beta: a.beta,
        gamma: a.gamma,
        scale: a.scale,
        shift: a.shift,
        pattern: c.pattern.map(|p| p.label()),
        paradoxical: c.pattern.map(|p| p.is_paradoxical()),
        boundary: c.boundary,
        first_choice: c.first,
        second_choice: c.second,
    })))
}

#[derive(Serialize)]
struct ZetaReport {
    #[serde(flatten)]
    result: ZetaResult,
    /// Outcomes are in millions, so this is `γ⋆` in currency units.
    gamma_star_millions_usd: f64,
    note: String,
}

pub(crate) fn zeta(a: &ZetaArgs) -> Result<Outcome, CliError> {
    let result = allais::zeta(a.beta, a.tol)?;
    let usd = result.gamma_star_currency();
    Ok(Outcome::ok(to_json(&ZetaReport {
        result,
        gamma_star_millions_usd: usd,
        note: format!("initial wealth threshold of about {usd:.0} USD"),
    })))
}

pub(crate) fn scan(a: &ScanArgs) -> Result<Outcome, CliError> {
    let rows = allais::zeta_scan(&a.betas, a.tol)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
    w.write_record([
        "beta",
        "gamma_star",
        "gamma_star_millions_usd",
        "bracket_lo",
        "bracket_hi",
        "iterations",
    ])
    .map_err(csv_err)?;
    for r in &rows {
        w.write_record([
            float(r.beta),
            float(r.gamma_star),
            float(r.gamma_star_currency()),
            float(r.bracket_lo),
            float(r.bracket_hi),
            r.iterations.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    let text = String::from_utf8(bytes).expect("csv writes UTF-8");
    match &a.out {
        Some(path) => {
            write_text(path, &text)?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(text)),
    }
}

#[derive(Serialize)]
struct SavageReport {
    params: OmeletParams,
    kernel: String,
    /// A1 (break into the bowl) against A2 (throw away).
    verdict: Verdict,
    preferred: &'static str,
    #[serde(rename = "regret_A2_given_A1")]
    regret_a2_given_a1: f64,
    #[serde(rename = "regret_A1_given_A2")]
    regret_a1_given_a2: f64,
    /// Agreement with the closed-form rule; only defined for linear kernels.
    closed_form_agrees: Option<bool>,
    naive_eu_prefers: &'static str,
    note: Option<String>,
    a1_vs_a3: Verdict,
    a2_vs_a3: Verdict,
    zero_washing_cost: bool,
}

fn act_name(v: &Verdict, first: &'static str, second: &'static str) -> &'static str {
    match v.direction {
        Preference::FirstPreferred => first,
        Preference::SecondPreferred => second,
        Preference::Indifferent => "indifferent",
    }
}

/// Whether the engine verdict for A1 vs A2 matches the sign of the
/// closed-form margin, with margins inside the band counted as indifference.
pub fn closed_form_matches(params: &OmeletParams, verdict: &Verdict) -> bool {
    let margin = savage::break_egg_margin(params);
    let scale = 1.0f64
        .max(params.p * (params.u5 - params.u_minus5))
        .max((1.0 - params.p) * (params.u6 - params.u5 - params.z / 2.0).abs());
    let expected = if margin.abs() <= 1e-12 * scale {
        Preference::Indifferent
    } else if margin > 0.0 {
        Preference::FirstPreferred
    } else {
        Preference::SecondPreferred
    };
    verdict.direction == expected
}

pub(crate) fn savage(a: &SavageArgs) -> Result<Outcome, CliError> {
    let f = parse_kernel(&a.f)?;
    let params = OmeletParams {
        p: a.p,
        u6: a.u6,
        u5: a.u5,
        u_minus5: a.u_minus5,
        z: a.z,
        w: a.w,
    };
    let acts = savage::omelet_acts(&params)?;
    let pi = params.states();
    let verdict = savage::prefer_act(&acts.a1, &acts.a2, &f, &pi)?;
    let preferred = act_name(&verdict, "A1", "A2");
    let naive = if savage::naive_eu_prefers_a1(&params) {
        "A1"
    } else {
        "A2"
    };
    let linear = matches!(f, RegretKernel::Linear { .. });
    let note = (linear && preferred != naive && preferred != "indifferent").then(|| {
        format!("regret prefers {preferred}; expected utility counting the unexperienced loss z prefers {naive}")
    });
    Ok(Outcome::ok(to_json(&SavageReport {
        params,
        kernel: f.to_string(),
        verdict,
        preferred,
        regret_a2_given_a1: savage::regret_of_not(&acts.a2, &acts.a1, &f, &pi)?,
        regret_a1_given_a2: savage::regret_of_not(&acts.a1, &acts.a2, &f, &pi)?,
        closed_form_agrees: linear.then(|| closed_form_matches(&params, &verdict)),
        naive_eu_prefers: naive,
        note,
        a1_vs_a3: savage::prefer_act(&acts.a1, &acts.a3, &f, &pi)?,
        a2_vs_a3: savage::prefer_act(&acts.a2, &acts.a3, &f, &pi)?,
        zero_washing_cost: acts.zero_washing_cost,
    })))
}

pub(crate) fn dominance(a: &DominanceArgs) -> Result<Outcome, CliError> {
    let x = read_lottery(&a.first)?;
    let y = read_lottery(&a.second)?;
    let v: DominanceVerdict = stochastic_dominance(&x, &y);
    Ok(Outcome::ok(to_json(&v)))
}

pub(crate) fn audit(a: &AuditArgs) -> Result<Outcome, CliError> {
    let property: Property = a
        .property
        .parse()
        .map_err(|_| CliError::Usage(format!("unknown property {:?}", a.property)))?;
    let kernels = if a.kernel.is_empty() {
        property.default_kernels()
    } else {
        a.kernel
            .iter()
            .map(|k| parse_kernel(k))
            .collect::<Result<Vec<_>, _>>()?
    };
    let u = parse_utility(&a.utility)?;
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let report = match (property, a.outcomes) {
        (Property::Transitivity, Some(n)) => {
            if !(1..=audit::gen::GRID_POINTS).contains(&n) {
                return Err(CliError::Usage(format!(
                    "--outcomes must lie in 1..={}",
                    audit::gen::GRID_POINTS
                )));
            }
            audit::audit_transitivity_sized(&kernels, &u, a.trials, a.seed, (n, n))
        }
        (_, Some(_)) => {
            return Err(CliError::Usage(
                "--outcomes applies to transitivity only".into(),
            ))
        }
        (p, None) => audit::run(p, &kernels, &u, a.trials, a.seed),
    };
    if let Some(dir) = &a.fixtures {
        for v in &report.violations {
            write_fixture(
                dir,
                &Fixture {
                    property,
                    utility: report.utility.clone(),
                    violation: v.clone(),
                },
            )?;
        }
    }
    let code = match report.status {
        AuditStatus::Pass => crate::EXIT_OK,
        AuditStatus::Fail => EXIT_VIOLATION,
        AuditStatus::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok(Outcome::with_code(code, to_json(&report)))
}

#[derive(Serialize)]
struct ReplayReport {
    property: Property,
    kernel: String,
    utility: String,
    trial: u64,
    reproduced: bool,
    check: Check,
}

pub(crate) fn replay(a: &ReplayArgs) -> Result<Outcome, CliError> {
    let fx = read_fixture(&a.fixture)?;
    let kernel = parse_kernel(&fx.violation.kernel)?;
    let u = parse_utility(&fx.utility)?;
    let check = audit::replay(fx.property, &kernel, &u, &fx.violation.instance)?;
    let code = if check.violated {
        EXIT_VIOLATION
    } else {
        crate::EXIT_OK
    };
    debug_assert!(kernel.g(0.0) == 0.0);
    Ok(Outcome::with_code(
        code,
        to_json(&ReplayReport {
            property: fx.property,
            kernel: kernel.to_string(),
            utility: u.to_string(),
            trial: fx.violation.trial,
            reproduced: check.violated,
            check,
        }),
    ))
}
