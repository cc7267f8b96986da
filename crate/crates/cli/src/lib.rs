//! Command implementations behind the `credal-im` binary.
//!
//! Every command writes its human-readable output to the supplied writer and
//! returns an exit status: 0 when everything checked passes, 1 when a
//! property violation was found, 2 for input errors (reported by the caller
//! from the returned `Err`).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use credal_im::audit::{self, AuditConfig, AuditReport, Property, Witness};
use credal_im::credal::{bayes_posterior_im, generalized_bayes_im, joint_minimizing_prior, GeneralizedBayes};
use credal_im::io::{self as cio, ModelBundle};
use credal_im::randomset::{self, CombinedIm, IntervalPrior, McConfig};
use credal_im::rng::DEFAULT_SEED;
use credal_im::underworld::{self, BetPolicy, Die, DieBox, ParameterSource, SideBetGameConfig, Strategy};
use credal_im::{CredalModel, Frame, Gamble, IMTable, MassFunction, Rational, Scalar};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "credal-im", version, about = "Belief-function inferential models: combination, generalized Bayes, audits and simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Combine two mass functions with Dempster's rule.
    ///
    /// Example: credal-im combine a.model b.model --exact
    Combine(CombineArgs),
    /// Tabulate the generalized Bayes IM of a credal model.
    ///
    /// Example: credal-im gb bundled:demo3-partial --output gb.im
    Gb(GbArgs),
    /// Write lower/upper distribution-function curves for the normal-mean IM.
    ///
    /// Example: credal-im im-curve --out-dir curves --mc 100000 --seed 7
    ImCurve(ImCurveArgs),
    /// Audit an IM table against a credal model.
    ///
    /// Example: credal-im audit bundled:demo3 --im bayes:uniform --json report.json
    Audit(AuditArgs),
    /// Run one of the betting simulations.
    ///
    /// Example: credal-im simulate sidebet bundled:demo3 --im bayes:uniform --strategy witness
    Simulate(SimulateArgs),
}

/// A model source: a path, or `bundled:NAME` for one of the built-in models.
fn read_source(source: &str) -> Result<String> {
    if let Some(name) = source.strip_prefix("bundled:") {
        return cio::bundled_model(name)
            .map(str::to_string)
            .ok_or_else(|| anyhow!("unknown bundled model {name:?}; available: {}", cio::BUNDLED_NAMES.join(", ")));
    }
    fs::read_to_string(source).with_context(|| format!("cannot read {source}"))
}

fn load_bundle<S: Scalar>(source: &str) -> Result<ModelBundle<S>> {
    let text = read_source(source)?;
    cio::parse_model::<S>(&text).with_context(|| format!("in {source}"))
}

fn load_model<S: Scalar>(source: &str) -> Result<CredalModel<S>> {
    load_bundle::<S>(source)?.credal().with_context(|| format!("in {source}"))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(Into::into),
    }
}

#[derive(Debug, Args)]
pub struct CombineArgs {
    /// First mass function (a model file with a [prior] section).
    pub left: String,
    /// Second mass function on the same frame.
    pub right: String,
    /// Use exact rational arithmetic.
    #[arg(long)]
    pub exact: bool,
    /// Write the combined mass function here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub fn cmd_combine(args: &CombineArgs, out: &mut dyn Write) -> Result<u8> {
    if args.exact {
        combine_generic::<Rational>(args, out)
    } else {
        combine_generic::<f64>(args, out)
    }
}

fn combine_generic<S: Scalar>(args: &CombineArgs, out: &mut dyn Write) -> Result<u8> {
    let left = load_bundle::<S>(&args.left)?.mass_function()?;
    let right = load_bundle::<S>(&args.right)?.mass_function()?;
    let combined = credal_im::dempster_combine(&left, &right)?;
    let mut text = format!("# conflict = {}\n", combined.conflict.to_decimal());
    text.push_str(&cio::serialize_model(&ModelBundle::from_mass(combined.mass)));
    write_output(args.output.as_deref(), &text, out)?;
    Ok(EXIT_PASS)
}

#[derive(Debug, Args)]
pub struct GbArgs {
    /// Credal model: a path or bundled:NAME.
    pub model: String,
    #[arg(long)]
    pub exact: bool,
    /// Write the IM table here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Data label at which to evaluate --gamble.
    #[arg(long, requires = "gamble")]
    pub y: Option<String>,
    /// Comma-separated gamble values in parameter order; prints lower and upper previsions.
    #[arg(long, requires = "y")]
    pub gamble: Option<String>,
}

pub fn cmd_gb(args: &GbArgs, out: &mut dyn Write) -> Result<u8> {
    if args.exact {
        gb_generic::<Rational>(args, out)
    } else {
        gb_generic::<f64>(args, out)
    }
}

fn parse_list<S: Scalar>(text: &str) -> Result<Vec<S>> {
    text.split(',')
        .map(|t| S::parse_decimal(t.trim()).ok_or_else(|| anyhow!("{t:?} is not a number")))
        .collect()
}

fn gb_generic<S: Scalar>(args: &GbArgs, out: &mut dyn Write) -> Result<u8> {
    let model = load_model::<S>(&args.model)?;
    if let (Some(y), Some(gamble)) = (&args.y, &args.gamble) {
        let yi = model
            .data_frame()
            .index_of(y)
            .ok_or_else(|| anyhow!("unknown data label {y:?}"))?;
        let gamble = Gamble::new(model.param_frame(), parse_list::<S>(gamble)?)?;
        let gb = GeneralizedBayes::new(&model)?;
        writeln!(out, "lower = {}", gb.lower(yi, &gamble)?.to_decimal())?;
        writeln!(out, "upper = {}", gb.upper(yi, &gamble)?.to_decimal())?;
        return Ok(EXIT_PASS);
    }
    let table = generalized_bayes_im(&model)?;
    write_output(args.output.as_deref(), &cio::serialize_im_table(&table), out)?;
    Ok(EXIT_PASS)
}

#[derive(Debug, Args)]
pub struct ImCurveArgs {
    /// Model file with an [interval-prior] section.
    #[arg(long, default_value = "bundled:normal-mean")]
    pub prior: String,
    /// Observed values; one curve file each.
    #[arg(long = "y", value_delimiter = ',', default_values_t = [5.0, 6.5, 7.5, 9.0])]
    pub ys: Vec<f64>,
    /// Grid lower end; defaults to y − span.
    #[arg(long, allow_negative_numbers = true)]
    pub theta_min: Option<f64>,
    /// Grid upper end; defaults to y + span.
    #[arg(long, allow_negative_numbers = true)]
    pub theta_max: Option<f64>,
    #[arg(long, default_value_t = 4.0)]
    pub span: f64,
    #[arg(long, default_value_t = 41)]
    pub points: usize,
    /// Estimate the combined columns from this many Monte Carlo draws instead of the closed form.
    #[arg(long)]
    pub mc: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Level of the reported credible intervals.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

/// `curve_y<y>.csv`.
pub fn curve_file_name(y: f64) -> String {
    format!("curve_y{}.csv", y.to_decimal())
}

pub fn cmd_im_curve(args: &ImCurveArgs, out: &mut dyn Write) -> Result<u8> {
    let bundle = load_bundle::<f64>(&args.prior)?;
    let prior = bundle
        .interval_prior
        .ok_or_else(|| anyhow!("{} has no [interval-prior] section", args.prior))?;
    if args.ys.is_empty() {
        bail!("at least one y value is required");
    }
    fs::create_dir_all(&args.out_dir).with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let combined_im = match args.mc {
        Some(n) => Some(CombinedIm::new(prior.clone(), McConfig { samples: n, seed: args.seed })?),
        None => None,
    };
    for &y in &args.ys {
        let lo = args.theta_min.unwrap_or(y - args.span);
        let hi = args.theta_max.unwrap_or(y + args.span);
        let grid = randomset::theta_grid(lo, hi, args.points)?;
        let rows = match &combined_im {
            Some(im) => randomset::cdf_curve_mc(im, y, &grid)?,
            None => randomset::cdf_curve(&prior, y, &grid)?,
        };
        let path = args.out_dir.join(curve_file_name(y));
        let file = fs::File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
        cio::write_curve(std::io::BufWriter::new(file), &rows)?;
        let (vlo, vhi) = randomset::credible_interval(&IntervalPrior::vacuous(), y, args.level)?;
        let (clo, chi) = randomset::credible_interval(&prior, y, args.level)?;
        writeln!(
            out,
            "y = {y}: vacuous [{vlo:.4}, {vhi:.4}] length {:.4}; combined [{clo:.4}, {chi:.4}] length {:.4}; wrote {}",
            vhi - vlo,
            chi - clo,
            path.display()
        )?;
    }
    Ok(EXIT_PASS)
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Credal model: a path or bundled:NAME.
    pub model: String,
    /// IM source: gb, vacuous, bayes:uniform, bayes:<p1,p2,...> or file:<path>.
    #[arg(long, default_value = "gb")]
    pub im: String,
    /// Comma-separated properties, or `all`.
    #[arg(long, default_value = "all")]
    pub properties: String,
    #[arg(long)]
    pub exact: bool,
    /// Extra uniform thresholds added to every critical set.
    #[arg(long, default_value_t = 0)]
    pub extra_grid: usize,
    /// Write a JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub fn parse_properties(text: &str) -> Result<Vec<Property>> {
    if text.trim() == "all" {
        return Ok(Property::ALL.to_vec());
    }
    text.split(',')
        .map(|name| {
            Property::parse(name.trim()).ok_or_else(|| {
                let names: Vec<_> = Property::ALL.iter().map(|p| p.name()).collect();
                anyhow!("unknown property {name:?}; expected all or one of {}", names.join(", "))
            })
        })
        .collect()
}

/// Builds the IM named by an `--im` source for a model.
pub fn resolve_im<S: Scalar>(source: &str, model: &CredalModel<S>) -> Result<IMTable<S>> {
    let (data, param) = (model.data_frame(), model.param_frame());
    if source == "gb" {
        return Ok(generalized_bayes_im(model)?);
    }
    if source == "vacuous" {
        return Ok(IMTable::vacuous(data, param)?);
    }
    if let Some(spec) = source.strip_prefix("bayes:") {
        let prior = if spec == "uniform" {
            let n = S::from_usize(param.len()).expect("frame size fits");
            vec![S::one() / n; param.len()]
        } else {
            parse_list::<S>(spec)?
        };
        if prior.len() != param.len() {
            bail!("bayes prior has {} entries for {} parameter values", prior.len(), param.len());
        }
        MassFunction::bayesian(param, prior.clone()).context("bayes prior")?;
        return Ok(bayes_posterior_im(model.likelihood(), &prior)?);
    }
    if let Some(path) = source.strip_prefix("file:") {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
        let table = cio::parse_im_table::<S>(&text).with_context(|| format!("in {path}"))?;
        if table.data_frame() != data || table.param_frame() != param {
            bail!("IM table frames in {path} differ from the model");
        }
        return Ok(table);
    }
    bail!("unknown IM source {source:?}; expected gb, vacuous, bayes:uniform, bayes:<p1,p2,...> or file:<path>")
}

fn witness_json<S: Scalar>(w: &Witness<S>, model: &CredalModel<S>) -> Value {
    json!({
        "hypothesis": w.hypothesis.as_ref().map(|h| h.to_string()),
        "theta": w.theta.map(|t| model.param_frame().label(t).to_string()),
        "threshold": w.threshold.as_ref().map(Scalar::to_decimal),
        "realized": w.realized.as_ref().map(Scalar::to_decimal),
        "achieved": w.achieved.to_decimal(),
        "bound": w.bound.to_decimal(),
        "margin": w.margin.to_decimal(),
    })
}

fn describe_witness<S: Scalar>(w: &Witness<S>, model: &CredalModel<S>) -> String {
    let mut parts = Vec::new();
    if let Some(h) = &w.hypothesis {
        parts.push(format!("H = {h}"));
    }
    if let Some(t) = w.theta {
        parts.push(format!("theta = {}", model.param_frame().label(t)));
    }
    if let Some(th) = &w.threshold {
        let name = if w.property == Property::Invulnerability { "beta" } else { "alpha" };
        match &w.realized {
            Some(r) => parts.push(format!("{name} -> {} (realized at {})", th.to_decimal(), r.to_decimal())),
            None => parts.push(format!("{name} = {}", th.to_decimal())),
        }
    }
    parts.push(format!(
        "achieved {} vs bound {} (margin {})",
        w.achieved.to_decimal(),
        w.bound.to_decimal(),
        w.margin.to_decimal()
    ));
    parts.join(", ")
}

pub fn cmd_audit(args: &AuditArgs, out: &mut dyn Write) -> Result<u8> {
    if args.exact {
        audit_generic::<Rational>(args, out)
    } else {
        audit_generic::<f64>(args, out)
    }
}

fn audit_generic<S: Scalar>(args: &AuditArgs, out: &mut dyn Write) -> Result<u8> {
    let properties = parse_properties(&args.properties)?;
    let model = load_model::<S>(&args.model)?;
    let im = resolve_im(&args.im, &model)?;
    let config = AuditConfig { extra_grid_points: args.extra_grid, ..AuditConfig::default() };
    let reports: Vec<AuditReport<S>> = audit::audit(&model, &im, &properties, &config)?;
    writeln!(out, "model: {}   im: {}", args.model, args.im)?;
    for r in &reports {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "{:<18} {verdict}  ({} thresholds examined)", r.property.name(), r.thresholds_examined)?;
        if let Some(w) = r.worst() {
            writeln!(out, "    worst witness: {}", describe_witness(w, &model))?;
            if r.witnesses.len() > 1 {
                writeln!(out, "    {} witnesses in total", r.witnesses.len())?;
            }
        }
    }
    let passed = reports.iter().all(AuditReport::passed);
    writeln!(out, "overall: {}", if passed { "PASS" } else { "FAIL" })?;
    if let Some(path) = &args.json {
        let report = json!({
            "model": args.model,
            "im": args.im,
            "exact": args.exact,
            "passed": passed,
            "properties": reports.iter().map(|r| json!({
                "property": r.property.name(),
                "passed": r.passed(),
                "thresholds_examined": r.thresholds_examined,
                "witnesses": r.witnesses.iter().map(|w| witness_json(w, &model)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        let text = serde_json::to_string_pretty(&report)? + "\n";
        fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(if passed { EXIT_PASS } else { EXIT_VIOLATION })
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(subcommand)]
    pub game: Game,
}

#[derive(Debug, Subcommand)]
pub enum Game {
    /// Agent 1 bets against an Ace every round.
    Agent1(Agent1Args),
    /// Agent 2 wagers against Agent 1's ruin by a horizon.
    Wager(WagerArgs),
    /// Statistician against scrutinizer side bets.
    Sidebet(SidebetArgs),
}

#[derive(Debug, Args)]
pub struct PolicyArgs {
    /// Odds k:1 against an Ace.
    #[arg(long, default_value_t = 4.0)]
    pub odds: f64,
    #[arg(long, default_value_t = 1.0)]
    pub stake: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub initial_capital: f64,
}

impl PolicyArgs {
    fn policy(&self) -> Result<BetPolicy> {
        Ok(BetPolicy::new(self.odds, self.stake)?.with_initial_capital(self.initial_capital))
    }
}

#[derive(Debug, Args)]
pub struct Agent1Args {
    /// Probability of an Ace; accepts p/q.
    #[arg(long, default_value = "1/6")]
    pub p_ace: String,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, default_value_t = 100_000)]
    pub rounds: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the capital trajectory CSV here.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

fn parse_probability(text: &str) -> Result<f64> {
    let value = Rational::parse_decimal(text)
        .map(|r| r.to_f64_lossy())
        .ok_or_else(|| anyhow!("{text:?} is not a probability"))?;
    Ok(value)
}

#[derive(Debug, Args)]
pub struct WagerArgs {
    /// Dice as `p:weight`, comma separated; e.g. `1/6:0.9,1/5:0.1`.
    #[arg(long, default_value = "1/6:1")]
    pub dice: String,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, default_value_t = 100)]
    pub horizon: usize,
    #[arg(long, default_value_t = 10_000)]
    pub replications: usize,
    /// Agent 2's odds against ruin.
    #[arg(long, default_value_t = 9.0)]
    pub wager_odds: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    Exhaustive,
    Witness,
    Random,
    Abstain,
}

#[derive(Debug, Args)]
pub struct SidebetArgs {
    /// Credal model: a path or bundled:NAME.
    pub model: String,
    /// IM source, as for `audit`.
    #[arg(long, default_value = "gb")]
    pub im: String,
    /// True parameter label. Defaults to the witness parameter for `witness`, the
    /// minimizing prior vertex for `exhaustive`, and the first label otherwise.
    #[arg(long, conflicts_with = "theta_dist")]
    pub theta: Option<String>,
    /// Draw the parameter each round from these probabilities, in frame order.
    #[arg(long)]
    pub theta_dist: Option<String>,
    #[arg(long, value_enum, default_value_t = StrategyName::Exhaustive)]
    pub strategy: StrategyName,
    /// Hypothesis for `witness`, e.g. "{t2 t3}"; found by false-confidence search when omitted.
    #[arg(long, requires = "beta")]
    pub hypothesis: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub rounds: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    #[arg(long)]
    pub log: Option<PathBuf>,
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<u8> {
    match &args.game {
        Game::Agent1(a) => {
            let p = parse_probability(&a.p_ace)?;
            let policy = a.policy.policy()?;
            let t = underworld::simulate_agent1(p, &policy, a.rounds, a.seed)?;
            let d = t.drift();
            writeln!(
                out,
                "rounds = {}, final capital = {}, drift = {:.6} ± {:.6} (expected {:.6}), ruin round = {}",
                t.rounds(),
                t.final_capital(),
                d.mean,
                d.std_error,
                policy.expected_drift(p),
                t.ruin_round.map_or("none".to_string(), |r| r.to_string())
            )?;
            if let Some(path) = &a.trajectory {
                cio::write_trajectory(create(path)?, &t)?;
            }
            Ok(EXIT_PASS)
        }
        Game::Wager(w) => {
            let dice = w
                .dice
                .split(',')
                .map(|part| {
                    let (p, weight) = part.split_once(':').ok_or_else(|| anyhow!("die {part:?} is not p:weight"))?;
                    Ok(Die { ace_probability: parse_probability(p)?, weight: parse_probability(weight)? })
                })
                .collect::<Result<Vec<_>>>()?;
            let estimate = underworld::simulate_agent2_wager(
                &DieBox::new(dice)?,
                &w.policy.policy()?,
                w.horizon,
                w.replications,
                w.wager_odds,
                w.seed,
            )?;
            writeln!(
                out,
                "P(ruin by round {}) = {:.6} ± {:.6}; odds {}:1 are {}favorable to Agent 2",
                estimate.horizon,
                estimate.ruin_probability,
                estimate.std_error,
                estimate.wager_odds,
                if estimate.favorable { "" } else { "not " }
            )?;
            Ok(EXIT_PASS)
        }
        Game::Sidebet(s) => sidebet(s, out),
    }
}

fn create(path: &Path) -> Result<std::io::BufWriter<fs::File>> {
    Ok(std::io::BufWriter::new(fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?))
}

fn sidebet(args: &SidebetArgs, out: &mut dyn Write) -> Result<u8> {
    let model = load_model::<f64>(&args.model)?;
    let im = resolve_im(&args.im, &model)?;
    let param: &Frame = model.param_frame();
    let mut default_source = ParameterSource::Fixed(0);
    let strategy = match args.strategy {
        StrategyName::Exhaustive => {
            let (h, beta, _) = underworld::exhaustive_choice(&model, &im)?;
            let gamble = audit::scrutinizer_gamble(&im, &h, &beta)?;
            default_source = ParameterSource::Distribution(joint_minimizing_prior(&model, &gamble)?);
            Strategy::Exhaustive
        }
        StrategyName::Random => Strategy::Random,
        StrategyName::Abstain => Strategy::Abstain,
        StrategyName::Witness => match (&args.hypothesis, args.beta) {
            (Some(h), Some(beta)) => {
                let labels: Vec<&str> = h.trim().trim_start_matches('{').trim_end_matches('}').split_whitespace().collect();
                Strategy::Witness { hypothesis: param.subset_from_labels(labels)?, beta }
            }
            _ => {
                let w = audit::false_confidence_search(model.likelihood(), &im, &AuditConfig::default())?
                    .ok_or_else(|| anyhow!("no false-confidence witness exists for this IM; pass --hypothesis and --beta"))?;
                let alpha = w.realized.expect("false-confidence witnesses carry a threshold");
                default_source = ParameterSource::Fixed(w.theta.expect("false-confidence witnesses carry a parameter"));
                writeln!(out, "witness: {}", describe_witness(&w, &model))?;
                Strategy::Witness { hypothesis: w.hypothesis.expect("witness hypothesis"), beta: 1.0 - alpha }
            }
        },
    };
    let parameter = match (&args.theta, &args.theta_dist) {
        (Some(label), _) => {
            ParameterSource::Fixed(param.index_of(label).ok_or_else(|| anyhow!("unknown parameter label {label:?}"))?)
        }
        (None, Some(dist)) => ParameterSource::Distribution(parse_list::<f64>(dist)?),
        (None, None) => default_source,
    };
    let outcome = underworld::simulate_sidebet_game(&SideBetGameConfig {
        model: &model,
        im: &im,
        parameter,
        strategy,
        rounds: args.rounds,
        seed: args.seed,
    })?;
    if let Some((h, beta)) = &outcome.played {
        writeln!(out, "played: H = {h}, beta = {beta}")?;
    }
    let per_round = outcome.per_round;
    writeln!(
        out,
        "rounds = {}, accepted = {}, mean payoff per round = {:.6} ± {:.6}",
        per_round.count,
        outcome.log.len(),
        per_round.mean,
        per_round.std_error
    )?;
    if let Some(acc) = outcome.per_accepted {
        writeln!(out, "mean payoff per accepted gamble = {:.6} ± {:.6}", acc.mean, acc.std_error)?;
    }
    if let Some(e) = outcome.expected_payoff {
        writeln!(out, "model-implied mean payoff per round = {e:.6}")?;
    }
    if let Some(path) = &args.trajectory {
        cio::write_trajectory(create(path)?, &outcome.trajectory)?;
    }
    if let Some(path) = &args.log {
        cio::write_gamble_log(create(path)?, &outcome.log)?;
    }
    let losing = per_round.mean < -3.0 * per_round.std_error;
    writeln!(out, "statistician {}", if losing { "loses money: IM exploited" } else { "not exploited" })?;
    Ok(if losing { EXIT_VIOLATION } else { EXIT_PASS })
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    match &cli.command {
        Command::Combine(a) => cmd_combine(a, out),
        Command::Gb(a) => cmd_gb(a, out),
        Command::ImCurve(a) => cmd_im_curve(a, out),
        Command::Audit(a) => cmd_audit(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
    }
}
