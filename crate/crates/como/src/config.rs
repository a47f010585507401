//! Experiment config files: a flat sectioned key-value format.
//!
//! Three sections. `[experiment]` holds run bookkeeping (`name`, `horizon`,
//! `runs`, `seed`, `checkpoint_stride`), `[env]` selects and parameterizes
//! the environment via its `kind` key, and `[policies]` lists one
//! `policy = <id> [key=value ...]` line per configured policy, in play
//! order. `#` starts a comment; blank lines are ignored. Unknown sections,
//! unknown keys, missing required keys, and out-of-range values are all
//! rejected at parse time with the offending name in the message.
//!
//! [`render`] writes a parsed config back out in canonical form; parsing
//! the rendered text reproduces an equivalent config, which is how the CLI
//! prints an auditable post-override copy of what it actually ran.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::env::{
    parse_edge_list, CommConfig, DiversityMode, EnvConfig, RateSchedule, RecConfig,
    RoutingConfig,
};
use crate::error::{Error, Result};
use crate::policy::{default_scale, PolicySpec};
use crate::sim::ExperimentSpec;

/// A parsed experiment description plus the bookkeeping the CLI needs to
/// render it back out.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    /// Experiment name, echoed in the summary file.
    pub name: String,
    pub spec: ExperimentSpec,
    /// Where the routing edge list was loaded from (resolved path), kept so
    /// rendering produces a re-parseable file.
    pub edges_file: Option<String>,
}

/// Optional command-line overrides applied on top of a parsed file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub runs: Option<u64>,
    pub horizon: Option<u64>,
}

impl Config {
    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(seed) = overrides.seed {
            self.spec.seed = seed;
        }
        if let Some(runs) = overrides.runs {
            self.spec.runs = runs;
        }
        if let Some(horizon) = overrides.horizon {
            self.spec.horizon = horizon;
        }
    }
}

/// One section's key-value pairs plus the ordered multi-value `policy` list.
struct Section {
    name: String,
    entries: Vec<(String, String)>,
}

fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| config_line(lineno, "unterminated section header"))?
                .trim()
                .to_string();
            sections.push(Section { name, entries: Vec::new() });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_line(lineno, "expected `key = value`"))?;
        let section = sections
            .last_mut()
            .ok_or_else(|| config_line(lineno, "key outside any [section]"))?;
        section
            .entries
            .push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(sections)
}

fn config_line(lineno: usize, msg: &str) -> Error {
    Error::Config(format!("line {}: {msg}", lineno + 1))
}

/// Single-valued section view: rejects duplicate keys and, at the end of
/// parsing, any key that was never consumed.
struct KeyTable {
    section: String,
    map: BTreeMap<String, String>,
}

impl KeyTable {
    fn new(section: &Section) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (key, value) in &section.entries {
            if map.insert(key.clone(), value.clone()).is_some() {
                return Err(Error::Config(format!(
                    "duplicate key `{key}` in [{}]",
                    section.name
                )));
            }
        }
        Ok(Self { section: section.name.clone(), map })
    }

    fn take(&mut self, key: &str) -> Result<String> {
        self.map.remove(key).ok_or_else(|| {
            Error::Config(format!("missing key `{key}` in [{}]", self.section))
        })
    }

    fn take_optional(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn finish(self) -> Result<()> {
        if let Some(key) = self.map.keys().next() {
            return Err(Error::Config(format!(
                "unknown key `{key}` in [{}]",
                self.section
            )));
        }
        Ok(())
    }
}

fn parse_scalar<T: std::str::FromStr>(section: &str, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| {
        Error::Config(format!(
            "key `{key}` in [{section}]: cannot parse `{value}`"
        ))
    })
}

fn parse_list(section: &str, key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split_whitespace()
        .map(|tok| parse_scalar(section, key, tok))
        .collect()
}

/// Parse a config file's text. `base_dir` anchors relative paths referenced
/// by the config (the routing `edges_file`); pass the config file's parent
/// directory.
pub fn parse(text: &str, base_dir: &Path) -> Result<Config> {
    let sections = split_sections(text)?;
    let mut experiment = None;
    let mut env = None;
    let mut policies = None;
    for section in &sections {
        match section.name.as_str() {
            "experiment" if experiment.is_none() => experiment = Some(section),
            "env" if env.is_none() => env = Some(section),
            "policies" if policies.is_none() => policies = Some(section),
            "experiment" | "env" | "policies" => {
                return Err(Error::Config(format!("duplicate section [{}]", section.name)))
            }
            other => return Err(Error::Config(format!("unknown section [{other}]"))),
        }
    }
    let experiment =
        experiment.ok_or_else(|| Error::Config("missing section [experiment]".into()))?;
    let env = env.ok_or_else(|| Error::Config("missing section [env]".into()))?;
    let policies =
        policies.ok_or_else(|| Error::Config("missing section [policies]".into()))?;

    let mut exp = KeyTable::new(experiment)?;
    let name = exp.take("name")?;
    let horizon: u64 = parse_scalar("experiment", "horizon", &exp.take("horizon")?)?;
    let runs: u64 = parse_scalar("experiment", "runs", &exp.take("runs")?)?;
    let seed: u64 = parse_scalar("experiment", "seed", &exp.take("seed")?)?;
    let checkpoint_stride: u64 =
        parse_scalar("experiment", "checkpoint_stride", &exp.take("checkpoint_stride")?)?;
    exp.finish()?;

    let (env_config, edges_file) = parse_env(env, base_dir)?;
    let policy_specs = parse_policies(policies)?;

    Ok(Config {
        name,
        spec: ExperimentSpec {
            env: env_config,
            policies: policy_specs,
            horizon,
            runs,
            seed,
            checkpoint_stride,
        },
        edges_file,
    })
}

fn parse_env(section: &Section, base_dir: &Path) -> Result<(EnvConfig, Option<String>)> {
    let mut table = KeyTable::new(section)?;
    let kind = table.take("kind")?;
    match kind.as_str() {
        "comm" => {
            let users = parse_scalar("env", "m", &table.take("m")?)?;
            let channels = parse_scalar("env", "q", &table.take("q")?)?;
            let rates_per_pair = parse_scalar("env", "h", &table.take("h")?)?;
            let snr = parse_scalar("env", "snr", &table.take("snr")?)?;
            let lambda = parse_list("env", "lambda", &table.take("lambda")?)?;
            let schedule = match table.take("rate_schedule")?.as_str() {
                "paper6" => {
                    if table.take_optional("rates").is_some() {
                        return Err(Error::Config(
                            "key `rates` requires rate_schedule = explicit".into(),
                        ));
                    }
                    RateSchedule::ProductLog
                }
                "explicit" => {
                    RateSchedule::Explicit(parse_list("env", "rates", &table.take("rates")?)?)
                }
                other => {
                    return Err(Error::Config(format!(
                        "key `rate_schedule` in [env]: expected paper6 or explicit, got `{other}`"
                    )))
                }
            };
            table.finish()?;
            let cfg = CommConfig { users, channels, rates_per_pair, snr, lambda, schedule };
            Ok((EnvConfig::Comm(cfg), None))
        }
        "recommender" => {
            let items = parse_scalar("env", "items", &table.take("items")?)?;
            let slate_size = parse_scalar("env", "slate_size", &table.take("slate_size")?)?;
            let users_per_step =
                parse_scalar("env", "users_per_step", &table.take("users_per_step")?)?;
            let type_probs = parse_list("env", "type_probs", &table.take("type_probs")?)?;
            let flat = parse_list("env", "like_probs", &table.take("like_probs")?)?;
            let diversity = match table.take("diversity_mode")?.as_str() {
                "cosine" => DiversityMode::Cosine,
                "variance" => DiversityMode::Variance,
                other => {
                    return Err(Error::Config(format!(
                        "key `diversity_mode` in [env]: expected cosine or variance, got `{other}`"
                    )))
                }
            };
            table.finish()?;
            if type_probs.is_empty() || items == 0 || flat.len() != type_probs.len() * items {
                return Err(Error::Config(format!(
                    "key `like_probs` in [env]: expected {} values ({} profiles × {items} items), got {}",
                    type_probs.len() * items,
                    type_probs.len(),
                    flat.len()
                )));
            }
            let like_probs = flat.chunks(items).map(|row| row.to_vec()).collect();
            let cfg = RecConfig {
                items,
                slate_size,
                users_per_step,
                type_probs,
                like_probs,
                diversity,
            };
            Ok((EnvConfig::Recommender(cfg), None))
        }
        "routing" => {
            let file = table.take("edges_file")?;
            let source = parse_scalar("env", "source", &table.take("source")?)?;
            let destination =
                parse_scalar("env", "destination", &table.take("destination")?)?;
            let max_path_len = table
                .take_optional("max_path_len")
                .map(|v| parse_scalar("env", "max_path_len", &v))
                .transpose()?;
            table.finish()?;
            let resolved = base_dir.join(&file);
            let text = std::fs::read_to_string(&resolved).map_err(|e| {
                Error::Config(format!(
                    "key `edges_file` in [env]: cannot read {}: {e}",
                    resolved.display()
                ))
            })?;
            let edges = parse_edge_list(&text)?;
            let cfg = RoutingConfig { edges, source, destination, max_path_len };
            Ok((EnvConfig::Routing(cfg), Some(resolved.to_string_lossy().into_owned())))
        }
        other => Err(Error::Config(format!(
            "key `kind` in [env]: expected comm, recommender, or routing, got `{other}`"
        ))),
    }
}

fn parse_policies(section: &Section) -> Result<Vec<PolicySpec>> {
    let mut specs: Vec<PolicySpec> = Vec::new();
    for (key, value) in &section.entries {
        if key != "policy" {
            return Err(Error::Config(format!("unknown key `{key}` in [policies]")));
        }
        specs.push(parse_policy_line(value)?);
    }
    if specs.is_empty() {
        return Err(Error::Config("empty [policies]: configure at least one policy".into()));
    }
    for (i, a) in specs.iter().enumerate() {
        if specs[..i].iter().any(|b| b.id() == a.id()) {
            return Err(Error::Config(format!(
                "duplicate policy `{}`: ids key result rows and random streams",
                a.id()
            )));
        }
    }
    Ok(specs)
}

fn parse_policy_line(value: &str) -> Result<PolicySpec> {
    let mut tokens = value.split_whitespace();
    let id = tokens
        .next()
        .ok_or_else(|| Error::Config("empty `policy` line in [policies]".into()))?;
    let mut k_star: Option<usize> = None;
    let mut scale: Option<f64> = None;
    for token in tokens {
        let (key, val) = token.split_once('=').ok_or_else(|| {
            Error::Config(format!("policy `{id}`: expected key=value, got `{token}`"))
        })?;
        match key {
            "k_star" if id == "pareto_ucb1" => {
                k_star = Some(parse_scalar("policies", "k_star", val)?);
            }
            "exploration_scale" => {
                scale = Some(parse_scalar("policies", "exploration_scale", val)?);
            }
            other => {
                return Err(Error::Config(format!(
                    "policy `{id}`: unknown parameter `{other}`"
                )))
            }
        }
    }
    let spec = match id {
        "como_ucb" => PolicySpec::ComoUcb {
            exploration_scale: scale.unwrap_or(default_scale::COMO_UCB),
        },
        "pareto_ucb1" => PolicySpec::ParetoUcb1 {
            k_star: k_star
                .ok_or_else(|| Error::Config("policy `pareto_ucb1` requires k_star".into()))?,
            exploration_scale: scale.unwrap_or(default_scale::PARETO_UCB1),
        },
        "llr" => PolicySpec::Llr { exploration_scale: scale.unwrap_or(default_scale::LLR) },
        "so_ucb1" => {
            PolicySpec::SoUcb1 { exploration_scale: scale.unwrap_or(default_scale::SO_UCB1) }
        }
        other => return Err(Error::Config(format!("unknown policy id `{other}`"))),
    };
    let s = spec.exploration_scale();
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Config(format!(
            "policy `{id}`: exploration_scale must be positive and finite, got {s}"
        )));
    }
    Ok(spec)
}

fn push_floats(out: &mut String, values: &[f64]) {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v}");
    }
}

/// Render a config in canonical form. Parsing the output with the same base
/// directory yields an equivalent [`Config`].
pub fn render(config: &Config) -> String {
    let mut out = String::new();
    let spec = &config.spec;
    let _ = writeln!(out, "[experiment]");
    let _ = writeln!(out, "name = {}", config.name);
    let _ = writeln!(out, "horizon = {}", spec.horizon);
    let _ = writeln!(out, "runs = {}", spec.runs);
    let _ = writeln!(out, "seed = {}", spec.seed);
    let _ = writeln!(out, "checkpoint_stride = {}", spec.checkpoint_stride);
    let _ = writeln!(out);
    let _ = writeln!(out, "[env]");
    match &spec.env {
        EnvConfig::Comm(cfg) => {
            let _ = writeln!(out, "kind = comm");
            let _ = writeln!(out, "m = {}", cfg.users);
            let _ = writeln!(out, "q = {}", cfg.channels);
            let _ = writeln!(out, "h = {}", cfg.rates_per_pair);
            let _ = writeln!(out, "snr = {}", cfg.snr);
            out.push_str("lambda = ");
            push_floats(&mut out, &cfg.lambda);
            out.push('\n');
            match &cfg.schedule {
                RateSchedule::ProductLog => {
                    let _ = writeln!(out, "rate_schedule = paper6");
                }
                RateSchedule::Explicit(rates) => {
                    let _ = writeln!(out, "rate_schedule = explicit");
                    out.push_str("rates = ");
                    push_floats(&mut out, rates);
                    out.push('\n');
                }
            }
        }
        EnvConfig::Recommender(cfg) => {
            let _ = writeln!(out, "kind = recommender");
            let _ = writeln!(out, "items = {}", cfg.items);
            let _ = writeln!(out, "slate_size = {}", cfg.slate_size);
            let _ = writeln!(out, "users_per_step = {}", cfg.users_per_step);
            out.push_str("type_probs = ");
            push_floats(&mut out, &cfg.type_probs);
            out.push('\n');
            out.push_str("like_probs = ");
            let flat: Vec<f64> = cfg.like_probs.iter().flatten().copied().collect();
            push_floats(&mut out, &flat);
            out.push('\n');
            let mode = match cfg.diversity {
                DiversityMode::Cosine => "cosine",
                DiversityMode::Variance => "variance",
            };
            let _ = writeln!(out, "diversity_mode = {mode}");
        }
        EnvConfig::Routing(cfg) => {
            let _ = writeln!(out, "kind = routing");
            let file = config.edges_file.as_deref().unwrap_or("edges.txt");
            let _ = writeln!(out, "edges_file = {file}");
            let _ = writeln!(out, "source = {}", cfg.source);
            let _ = writeln!(out, "destination = {}", cfg.destination);
            if let Some(cap) = cfg.max_path_len {
                let _ = writeln!(out, "max_path_len = {cap}");
            }
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "[policies]");
    for policy in &spec.policies {
        match policy {
            PolicySpec::ParetoUcb1 { k_star, exploration_scale } => {
                let _ = writeln!(
                    out,
                    "policy = pareto_ucb1 k_star={k_star} exploration_scale={exploration_scale}"
                );
            }
            other => {
                let _ = writeln!(
                    out,
                    "policy = {} exploration_scale={}",
                    other.id(),
                    other.exploration_scale()
                );
            }
        }
    }
    out
}
