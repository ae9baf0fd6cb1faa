use propg_core::bernoulli::{
    bernoulli_mod_p, ihgen_condition, nm_bound, odd_primes_up_to, sigma_valuation, BernoulliTable,
    KappaModel, Parity,
};
use propg_core::experiments::{random_group_element, sample_rng};
use propg_core::freelie::{
    degree_twelve_commutators, graded_dimension, lyndon_basis, lyndon_count, rank_of,
    standard_degrees, BasisTable,
};
use propg_core::freeness::{
    build_tower, generation_check, graded_independence, rearrangement_holds, TowerSpec,
};
use propg_core::idempotent::DeltaGammaAction;
use propg_core::padic::{vp_factorial, Valuation};
use propg_core::{Engine, EngineConfig, Error, GroupElement};

use crate::cache::Cache;
use crate::error::CliResult;
use crate::report::Report;
use crate::{CacheAction, Cli, Command, EngineArgs};

/// Lyndon words are enumerated explicitly; beyond this degree that is slow.
const MAX_ENUMERATION_DEGREE: u32 = 40;

pub(crate) fn dispatch(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Irregular { pmax, no_cache } => irregular(cli, *pmax, *no_cache),
        Command::Bounds {
            p,
            m_min,
            m_max,
            vandiver,
        } => bounds(*p, *m_min, *m_max, *vandiver),
        Command::LieDims { max_degree } => lie_dims(*max_degree),
        Command::LieBasis {
            max_degree,
            no_cache,
        } => lie_basis(*max_degree, *no_cache),
        Command::Rank12 { p } => rank12(*p),
        Command::EpsilonDemo { engine, m, samples } => epsilon_demo(cli, engine, *m, *samples),
        Command::SigmaTower {
            engine,
            k,
            steps,
            applications,
        } => sigma_tower(cli, engine, *k, *steps, *applications),
        Command::SigmaValuation {
            p,
            k,
            j,
            v0,
            precision,
            unit,
        } => sigma_valuation_cmd(*p, *k, *j, *v0, *precision, *unit),
        Command::Freegp {
            p,
            precision,
            class,
            r,
            depth,
        } => freegp(cli, *p, *precision, *class, *r, *depth),
        Command::Ihgen { p, m, vandiver } => ihgen(*p, *m, *vandiver),
        Command::Cache { action } => cache(*action),
    }
}

fn bernoulli_tables(cli: &Cli, pmax: u64, no_cache: bool) -> CliResult<Vec<BernoulliTable>> {
    let primes = odd_primes_up_to(pmax);
    let cache = if no_cache {
        None
    } else {
        Some(Cache::from_env()?)
    };
    let cached: Vec<Option<BernoulliTable>> = primes
        .iter()
        .map(|&p| cache.as_ref().and_then(|c| c.load_bernoulli(p)))
        .collect();
    let missing: Vec<u64> = primes
        .iter()
        .zip(&cached)
        .filter(|(_, t)| t.is_none())
        .map(|(&p, _)| p)
        .collect();
    let computed = cli
        .exec()
        .map(missing, bernoulli_mod_p)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(c) = &cache {
        for t in &computed {
            c.store_bernoulli(t)?;
        }
    }
    let mut fresh = computed.into_iter();
    Ok(cached
        .into_iter()
        .map(|t| t.unwrap_or_else(|| fresh.next().expect("one table per missing prime")))
        .collect())
}

fn irregular(cli: &Cli, pmax: u64, no_cache: bool) -> CliResult<Report> {
    let tables = bernoulli_tables(cli, pmax, no_cache)?;
    let mut report = Report::new("irregular", &["p", "m"]);
    report.param("pmax", pmax);
    let mut irregular_primes = 0;
    let mut pairs = 0;
    for t in &tables {
        let found = t.irregular_pairs();
        if !found.is_empty() {
            irregular_primes += 1;
        }
        for pair in found {
            pairs += 1;
            report.row([pair.p, pair.m]);
        }
    }
    report
        .summary("primes_scanned", tables.len())
        .summary("irregular_primes", irregular_primes)
        .summary("irregular_pairs", pairs);
    Ok(report)
}

fn bounds(p: u64, m_min: u64, m_max: Option<u64>, vandiver: bool) -> CliResult<Report> {
    let m_max = m_max.unwrap_or(4 * p);
    let mut report = Report::new(
        "bounds",
        &[
            "p",
            "m",
            "k",
            "vp_kp_factorial",
            "vp_m_minus_1_factorial",
            "bound",
            "vandiver_assumed",
        ],
    );
    report
        .param("p", p)
        .param("m_min", m_min)
        .param("m_max", m_max)
        .param("vandiver", vandiver);
    let start = m_min.max(3) | 1;
    let mut rows = 0;
    let mut max_bound = 0;
    for m in (start..=m_max).step_by(2) {
        let r = nm_bound(p, m, vandiver)?;
        max_bound = max_bound.max(r.bound);
        rows += 1;
        report.row([
            r.p.to_string(),
            r.m.to_string(),
            r.k.to_string(),
            r.vp_kp_factorial.to_string(),
            r.vp_m_minus_one_factorial.to_string(),
            r.bound.to_string(),
            r.vandiver_assumed.to_string(),
        ]);
    }
    if rows == 0 {
        nm_bound(p, 3, vandiver)?;
    }
    report.summary("rows", rows).summary("max_bound", max_bound);
    Ok(report)
}

fn lie_dims(max_degree: u32) -> CliResult<Report> {
    if max_degree < 3 {
        return Err(Error::InvalidArgument("max degree must be at least 3".into()).into());
    }
    let degrees = standard_degrees(max_degree);
    let mut report = Report::new("lie-dims", &["degree", "dimension", "lyndon_words"]);
    report
        .param("max_degree", max_degree)
        .param("generators", "odd 3..");
    let mut agree = true;
    for m in 3..=max_degree {
        let d = graded_dimension(m, &degrees)?;
        let count = if m <= MAX_ENUMERATION_DEGREE {
            let c = lyndon_count(m, &degrees);
            agree &= c == d;
            c.to_string()
        } else {
            String::new()
        };
        report.row([m.to_string(), d.to_string(), count]);
    }
    report.summary("enumeration_agrees", agree);
    Ok(report)
}

fn basis_table(max_degree: u32, no_cache: bool) -> CliResult<BasisTable> {
    if max_degree > MAX_ENUMERATION_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "max degree {max_degree} exceeds {MAX_ENUMERATION_DEGREE}"
        ))
        .into());
    }
    if no_cache {
        return Ok(lyndon_basis(max_degree)?);
    }
    let cache = Cache::from_env()?;
    if let Some(t) = cache.load_basis(max_degree) {
        return Ok(t);
    }
    let t = lyndon_basis(max_degree)?;
    cache.store_basis(&t)?;
    Ok(t)
}

fn lie_basis(max_degree: u32, no_cache: bool) -> CliResult<Report> {
    let table = basis_table(max_degree, no_cache)?;
    let mut report = Report::new("lie-basis", &["degree", "index", "word", "bracket"]);
    report.param("max_degree", max_degree);
    let mut total = 0;
    for (m, words) in &table.by_degree {
        for (i, w) in words.iter().enumerate() {
            total += 1;
            report.row([m.to_string(), i.to_string(), w.to_string(), w.bracketing()]);
        }
    }
    report.summary("basis_elements", total);
    Ok(report)
}

fn rank12(p: u64) -> CliResult<Report> {
    propg_core::padic::PadicInt::new(p, 1, 0)?;
    let pair = degree_twelve_commutators();
    let rank = rank_of(&pair, 12, p)?;
    let mut report = Report::new("rank12", &["element", "expansion"]);
    report.param("p", p).param("degree", 12);
    report.row(["[s3, s9]".to_string(), pair[0].to_string()]);
    report.row(["[s5, s7]".to_string(), pair[1].to_string()]);
    report
        .summary("rank_q", rank.over_q)
        .summary("rank_mod_p", rank.mod_p)
        .summary("independent_q", rank.over_q == 2)
        .summary("independent_mod_p", rank.mod_p == 2);
    Ok(report)
}

/// Missing twist lists default to `default_delta` (δ) and 1 (γ) on every
/// generator.
fn engine_from(args: &EngineArgs, default_delta: i64) -> CliResult<Engine> {
    let r = args.generators;
    let twists = |given: &[i64], d: i64| {
        if given.is_empty() {
            vec![d; r]
        } else {
            given.to_vec()
        }
    };
    let config = EngineConfig::new(args.p, args.precision, args.class, r)
        .with_delta_twists(twists(&args.delta_twists, default_delta))
        .with_gamma_twists(twists(&args.gamma_twists, 1))
        .with_budget(args.budget);
    Ok(Engine::new(config)?)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn depth(d: Option<usize>) -> String {
    d.map_or_else(|| "inf".to_string(), |d| d.to_string())
}

fn engine_meta(report: &mut Report, engine: &Engine) {
    let c = engine.config();
    report
        .meta("p", c.p)
        .meta("precision", c.precision)
        .meta("class", c.class)
        .meta("generators", c.generators)
        .meta("delta_twists", join(&c.delta_twists))
        .meta("gamma_twists", join(&c.gamma_twists))
        .meta("guard_digits", engine.guard_digits())
        .meta("budget", c.budget);
}

fn epsilon_demo(cli: &Cli, args: &EngineArgs, m: i64, samples: u64) -> CliResult<Report> {
    let engine = engine_from(args, 1)?;
    let action = DeltaGammaAction::new(&engine);
    let mut report = Report::new(
        "epsilon-demo",
        &[
            "sample",
            "m",
            "iterations",
            "difference_depths",
            "difference_bound_i",
            "difference_bound_i_plus_1",
            "defect_bound",
            "first_defect",
            "equivariant",
        ],
    );
    report.param("m", m).param("samples", samples);
    engine_meta(&mut report, &engine);
    let reports = cli
        .exec()
        .map((0..samples).collect(), |i| {
            let mut rng = sample_rng(cli.seed, i);
            let g = random_group_element(&engine, &mut rng);
            action.depth_report(&g, m)
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let mut holds = 0;
    let mut strict = 0;
    for (i, r) in reports.iter().enumerate() {
        holds += usize::from(r.holds(engine.class()));
        strict += usize::from(r.differences_ok_strict());
        report.row([
            i.to_string(),
            r.m.to_string(),
            r.iterations.to_string(),
            join(r.difference_degrees.iter().map(|&d| depth(d))),
            r.differences_ok().to_string(),
            r.differences_ok_strict().to_string(),
            r.defects_ok().to_string(),
            r.first_defect_ok().to_string(),
            r.equivariant.to_string(),
        ]);
    }
    report
        .summary("samples", samples)
        .summary("all_checks_pass", holds)
        .summary("strict_difference_bound_pass", strict);
    Ok(report)
}

fn min_valuation(g: &GroupElement) -> Valuation {
    g.abelian_part()
        .iter()
        .map(|a| a.valuation())
        .min()
        .unwrap_or(Valuation::Infinite)
}

fn valuation_text(v: Valuation) -> String {
    v.finite()
        .map_or_else(|| "inf".to_string(), |v| v.to_string())
}

fn sigma_tower(
    cli: &Cli,
    args: &EngineArgs,
    k: i64,
    steps: usize,
    applications: Option<usize>,
) -> CliResult<Report> {
    let engine = engine_from(args, k)?;
    let action = DeltaGammaAction::new(&engine);
    let mut rng = sample_rng(cli.seed, 0);
    let start = random_group_element(&engine, &mut rng);
    let seed = action.stabilize(&start, k)?.element;
    let stages = match applications {
        Some(n) => action.sigma_tower_finite(&seed, k, steps, n)?,
        None => action.sigma_tower(&seed, k, steps)?,
    };
    let mut report = Report::new(
        "sigma-tower",
        &[
            "stage",
            "m",
            "iterations",
            "lcs_degree",
            "abelian_valuation",
            "abelian_part",
            "equivariant",
        ],
    );
    report.param("k", k).param("steps", steps);
    if let Some(n) = applications {
        report.param("applications", n);
    }
    engine_meta(&mut report, &engine);
    for (i, s) in stages.iter().enumerate() {
        report.row([
            i.to_string(),
            s.m.to_string(),
            s.iterations.to_string(),
            depth(s.element.lcs_degree()),
            valuation_text(min_valuation(&s.element)),
            join(s.element.abelian_part().iter().map(|a| a.residue())),
            action.is_equivariant(&s.element, s.m)?.to_string(),
        ]);
    }
    report.summary("stages", stages.len());
    Ok(report)
}

fn sigma_valuation_cmd(
    p: u64,
    k: u64,
    j: u64,
    v0: u32,
    precision: Option<u32>,
    unit: u64,
) -> CliResult<Report> {
    let needed = (vp_factorial(p, j * p) + v0 as u64 + 5) as u32;
    let precision = precision.unwrap_or(needed);
    let model = KappaModel::new(p, precision, k, v0)?.with_unit(unit)?;
    let r = sigma_valuation(&model, j)?;
    let mut report = Report::new(
        "sigma-valuation",
        &["m", "closed_form", "simulated", "agree"],
    );
    report
        .param("p", p)
        .param("k", k)
        .param("j", j)
        .param("v0", v0)
        .param("precision", precision)
        .param("unit", unit);
    report.row([
        r.m.to_string(),
        r.closed_form.to_string(),
        valuation_text(r.simulated),
        r.agrees().to_string(),
    ]);
    report.summary("agree", r.agrees());
    Ok(report)
}

fn freegp(
    cli: &Cli,
    p: u64,
    precision: u32,
    class: usize,
    r: usize,
    depth_j: usize,
) -> CliResult<Report> {
    let engine = Engine::new(EngineConfig::new(p, precision, class, r + 1))?;
    if depth_j == 0 {
        return Err(Error::InvalidArgument("depth must be positive".into()).into());
    }
    let mut rng = sample_rng(cli.seed, 0);
    let spec = TowerSpec::random(&engine, r, depth_j, &mut rng);
    let tower = build_tower(&engine, &spec)?;
    let rearrangement = rearrangement_holds(&tower, &spec)?;
    let k_max = 2.min(depth_j - 1).min(class - 1);
    let generation = if k_max == 0 {
        true
    } else {
        generation_check(&tower, &spec, k_max)?
    };

    let zero_spec = TowerSpec::zero(&engine, r, depth_j);
    let zero = build_tower(&engine, &zero_spec)?;
    let mut report = Report::new("freegp", &["i", "j", "lcs_degree", "leading_form"]);
    report.param("r", r).param("depth", depth_j);
    engine_meta(&mut report, &engine);
    let mut depths_ok = true;
    for (i, row) in zero.elements.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            depths_ok &= x.lcs_degree() == Some(j + 1);
            report.row([
                (i + 1).to_string(),
                (j + 1).to_string(),
                depth(x.lcs_degree()),
                x.leading_form()?.to_string(),
            ]);
        }
    }
    let flat: Vec<GroupElement> = zero.elements.into_iter().flatten().collect();
    let independence = graded_independence(&flat)?;
    report
        .summary("rearrangement_random_a", rearrangement)
        .summary("generation_k_max", k_max)
        .summary("generation_random_a", generation)
        .summary("zero_tower_depths", depths_ok)
        .summary("zero_tower_independent", independence.independent);
    Ok(report)
}

fn ihgen(p: u64, m: u64, vandiver: bool) -> CliResult<Report> {
    let c = ihgen_condition(p, m, vandiver)?;
    let mut report = Report::new(
        "ihgen",
        &[
            "p",
            "m",
            "parity",
            "bernoulli_index",
            "applies",
            "vandiver_assumed",
            "conflicts_with_vandiver",
        ],
    );
    report
        .param("p", p)
        .param("m", m)
        .param("vandiver", vandiver);
    let parity = match c.parity {
        Parity::Even => "even",
        Parity::Odd => "odd",
    };
    report.row([
        c.p.to_string(),
        c.m.to_string(),
        parity.to_string(),
        c.bernoulli_index.to_string(),
        c.applies.to_string(),
        c.vandiver_assumed.to_string(),
        c.conflicts_with_vandiver.to_string(),
    ]);
    report.summary("applies", c.applies);
    Ok(report)
}

fn cache(action: CacheAction) -> CliResult<Report> {
    let cache = Cache::from_env()?;
    match action {
        CacheAction::Inspect => {
            let mut report = Report::new("cache", &["kind", "file", "status"]);
            report.param("action", "inspect");
            let entries = cache.entries()?;
            for e in &entries {
                report.row([e.kind, &e.file, if e.valid { "ok" } else { "stale" }]);
            }
            report.summary("entries", entries.len());
            Ok(report)
        }
        CacheAction::Clear => {
            let removed = cache.clear()?;
            let mut report = Report::new("cache", &[]);
            report.param("action", "clear").summary("removed", removed);
            Ok(report)
        }
    }
}
