//! `dsctl`: command-line front end for supervisor synthesis, localization and
//! distribution.
//!
//! Exit codes: 0 success or property true, 1 property false, 2 usage error,
//! 3 input error, 4 hypothesis unmet.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dsctl::format::{parse_automaton, parse_partition, serialize_automaton, serialize_partition};
use dsctl::report::disablement_report;
use dsctl::{
    build_feasible_local, build_feasible_supervisor, decompose_by_theorem1, disabled_events, gen_guideway,
    is_conormal, is_controllable, is_coparanormal, is_decomposable, is_local_controller,
    is_local_controller_within, is_nonblocking, is_normal, is_paranormal, is_relative_observable, localize,
    meet, meet_all, project, reduce_local, reduce_supervisor, supremal_controllable, sync_product, trim,
    ControlPartition, EventDecl, Generator, ProjectionFamily, ProjectionSpec,
};

#[derive(Parser)]
#[command(name = "dsctl", version, about = "Supervisory control of discrete-event systems")]
struct Cli {
    /// Also write a Graphviz `.dot` file next to every automaton written.
    #[arg(long, global = true)]
    dot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synchronous product of two or more automata.
    Compose {
        out: PathBuf,
        #[arg(num_args = 2.., required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Meet (product over a shared alphabet) of two or more automata.
    Meet {
        out: PathBuf,
        #[arg(num_args = 2.., required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Reachable and coreachable part of an automaton.
    Trim {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Supremal controllable sublanguage of a specification.
    Supcon {
        plant: PathBuf,
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Write the per-state disablement report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Natural projection onto the listed events.
    Project {
        input: PathBuf,
        /// Comma-separated events to keep.
        #[arg(long, value_delimiter = ',')]
        keep: Vec<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Inverse projection: adds new events as self-loops at every state.
    Lift {
        input: PathBuf,
        /// Comma-separated `label:c` or `label:u` declarations.
        #[arg(long, value_delimiter = ',', required = true)]
        add: Vec<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Feasible supervisor under partial observation.
    Feasible {
        sup: PathBuf,
        plant: PathBuf,
        #[command(flatten)]
        observation: Observation,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Reduces a supervisor by control congruence.
    Reduce {
        sup: PathBuf,
        plant: PathBuf,
        #[arg(long, requires = "block")]
        partition: Option<PathBuf>,
        #[arg(long, requires = "partition")]
        block: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// One reduced local controller per block of a partition.
    Localize {
        sup: PathBuf,
        plant: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Feasible local controllers under partial observation.
    Distribute {
        sup: PathBuf,
        plant: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        /// Comma-separated observable events; all events when omitted.
        #[arg(long)]
        observable: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Per-channel controllers of a relatively observable supervisor.
    Decompose {
        sup: PathBuf,
        plant: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[command(flatten)]
        observation: Observation,
        /// Accept any number of blocks; each channel loses every unobservable
        /// controllable event of the other blocks.
        #[arg(long)]
        generalized: bool,
        /// Language relative to which observability is required (default: SUP).
        #[arg(long)]
        ambient: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Decide a property; exit 0 when it holds and 1 when it does not.
    #[command(subcommand)]
    Check(Check),
    /// Write built-in example models.
    #[command(subcommand)]
    Gen(Gen),
}

#[derive(Args)]
struct Observation {
    /// Comma-separated observable events (may be empty).
    #[arg(long)]
    observable: String,
}

#[derive(Args)]
struct Channels {
    /// Observable events of one channel; repeat once per channel.
    #[arg(long = "channel", conflicts_with = "partition")]
    channels: Vec<String>,
    /// Derive one channel per block: channel `i` loses the controllable events of
    /// the other blocks (only the unobservable ones when `--observable` is given).
    #[arg(long)]
    partition: Option<PathBuf>,
    #[arg(long, requires = "partition")]
    observable: Option<String>,
}

#[derive(Subcommand)]
enum Check {
    Nonblocking { input: PathBuf },
    Controllable { k: PathBuf, plant: PathBuf },
    Normal {
        k: PathBuf,
        plant: PathBuf,
        #[command(flatten)]
        observation: Observation,
    },
    Paranormal {
        k: PathBuf,
        plant: PathBuf,
        #[command(flatten)]
        observation: Observation,
    },
    /// Relative observability of K with respect to C (default C = K).
    Relobs {
        k: PathBuf,
        plant: PathBuf,
        #[command(flatten)]
        observation: Observation,
        #[arg(long)]
        ambient: Option<PathBuf>,
    },
    /// Coparanormality of local languages, one per channel.
    Coparanormal {
        k: PathBuf,
        plant: PathBuf,
        #[arg(required = true)]
        locals: Vec<PathBuf>,
        #[command(flatten)]
        channels: Channels,
    },
    Decomposable {
        k: PathBuf,
        plant: PathBuf,
        #[command(flatten)]
        channels: Channels,
    },
    Conormal {
        k: PathBuf,
        plant: PathBuf,
        #[command(flatten)]
        channels: Channels,
    },
    /// The plant met with all controllers is language-equal to SUP.
    Equiv {
        plant: PathBuf,
        sup: PathBuf,
        #[arg(required = true)]
        controllers: Vec<PathBuf>,
    },
    /// The controller disables only events of the given block.
    Local {
        controller: PathBuf,
        plant: PathBuf,
        /// Comma-separated events the controller may disable.
        #[arg(long, value_delimiter = ',', required = true)]
        block: Vec<String>,
        /// Only consider strings also accepted by this supervisor.
        #[arg(long)]
        within: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// The two-vehicle guideway: vehicles, plant, specification and partitions.
    Guideway {
        #[arg(short, long)]
        output: PathBuf,
    },
}

enum Failure {
    Input(String),
    Hypothesis(String),
    False(String),
}

impl From<dsctl::Error> for Failure {
    fn from(e: dsctl::Error) -> Self {
        match e {
            dsctl::Error::HypothesisUnmet(_) => Failure::Hypothesis(e.to_string()),
            dsctl::Error::DecompositionFailed(_) => Failure::False(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let dot = cli.dot;
    match run(cli.command, dot) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::False(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Hypothesis(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Generator, Failure> {
    parse_automaton(&read_text(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<Generator>, Failure> {
    paths.iter().map(|p| load(p)).collect()
}

fn load_partition(path: &Path) -> Result<ControlPartition, Failure> {
    parse_partition(&read_text(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Observable set from a comma-separated list; every label must be in `g`'s alphabet.
fn observation(list: &str, g: &Generator) -> Result<ProjectionSpec, Failure> {
    let labels: Vec<&str> = list.split(',').map(str::trim).filter(|l| !l.is_empty()).collect();
    for l in &labels {
        g.alphabet().require(l)?;
    }
    Ok(ProjectionSpec::new(labels))
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Input(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn write_automaton(path: &Path, g: &Generator, dot: bool) -> Result<(), Failure> {
    write_atomic(path, &serialize_automaton(g))?;
    if dot {
        write_atomic(&path.with_extension("dot"), &g.canonical().to_dot())?;
    }
    Ok(())
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))
}

fn verdict(holds: bool) -> Outcome {
    println!("{holds}");
    Ok(holds)
}

fn fold(inputs: &[Generator], op: fn(&Generator, &Generator) -> dsctl::Result<Generator>) -> Result<Generator, Failure> {
    let mut acc = inputs[0].clone();
    for g in &inputs[1..] {
        acc = op(&acc, g)?;
    }
    Ok(acc)
}

fn run(command: Command, dot: bool) -> Outcome {
    match command {
        Command::Compose { out, inputs } => {
            let g = fold(&load_all(&inputs)?, sync_product)?;
            write_automaton(&out, &g, dot)?;
        }
        Command::Meet { out, inputs } => {
            let gens = load_all(&inputs)?;
            write_automaton(&out, &meet_all(&gens)?, dot)?;
        }
        Command::Trim { input, output } => write_automaton(&output, &trim(&load(&input)?), dot)?,
        Command::Supcon {
            plant,
            spec,
            output,
            report,
        } => {
            let (plant, spec) = (load(&plant)?, load(&spec)?);
            if !is_nonblocking(&plant) {
                eprintln!("warning: plant `{}` is blocking", plant.name());
            }
            let res = supremal_controllable(&spec, &plant)?;
            write_automaton(&output, &res.supervisor, dot)?;
            if let Some(path) = report {
                write_atomic(&path, &disablement_report(&res.supervisor, &res.disabled))?;
            }
            println!("supervisor states {}", res.supervisor.state_count());
        }
        Command::Project { input, keep, output } => {
            let g = load(&input)?;
            let spec = observation(&keep.join(","), &g)?;
            write_automaton(&output, &project(&g, &spec)?, dot)?;
        }
        Command::Lift { input, add, output } => {
            let g = load(&input)?;
            let decls = add
                .iter()
                .map(|d| match d.split_once(':') {
                    Some((l, "c")) => Ok(EventDecl::controllable(l)),
                    Some((l, "u")) => Ok(EventDecl::uncontrollable(l)),
                    _ => Err(Failure::Input(format!("`{d}`: expected label:c or label:u"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            write_automaton(&output, &g.selfloop(&decls)?, dot)?;
        }
        Command::Feasible {
            sup,
            plant,
            observation: obs,
            output,
        } => {
            let (sup, plant) = (load(&sup)?, load(&plant)?);
            let p = observation(&obs.observable, &sup)?;
            let f = build_feasible_supervisor(&sup, &plant, &p)?;
            if f.blocking {
                eprintln!("warning: the feasible supervisor blocks the plant");
            }
            write_automaton(&output, &f.supervisor, dot)?;
        }
        Command::Reduce {
            sup,
            plant,
            partition,
            block,
            output,
        } => {
            let (sup, plant) = (load(&sup)?, load(&plant)?);
            let partition = partition.as_deref().map(load_partition).transpose()?;
            let red = reduce_supervisor(&sup, &plant, partition.as_ref(), block)?;
            println!("states {} -> {}", sup.state_count(), red.state_count());
            write_automaton(&output, &red, dot)?;
        }
        Command::Localize {
            sup,
            plant,
            partition,
            output,
        } => {
            let (sup, plant) = (load(&sup)?, load(&plant)?);
            let partition = load_partition(&partition)?;
            let set = localize(&sup, &plant, &partition)?;
            let sizes: Vec<(usize, usize)> = set
                .locals
                .iter()
                .zip(&set.reduced)
                .map(|(l, r)| (l.state_count(), r.state_count()))
                .collect();
            write_controllers(&output, &set.locals, &set.reduced, dot)?;
            let mut report = disablement_report(&sup, &disabled_events(&sup, &plant)?);
            report.push_str(&block_summary(&partition, &sup, &sizes));
            write_atomic(&output.join("report.txt"), &report)?;
        }
        Command::Distribute {
            sup,
            plant,
            partition,
            observable,
            output,
        } => {
            let (sup, plant) = (load(&sup)?, load(&plant)?);
            let partition = load_partition(&partition)?;
            let p = match observable {
                Some(list) => observation(&list, &sup)?,
                None => ProjectionSpec::identity(sup.alphabet()),
            };
            let f = build_feasible_supervisor(&sup, &plant, &p)?;
            let locals = (0..partition.len())
                .map(|i| build_feasible_local(&f.supervisor, &plant, &partition, i))
                .collect::<dsctl::Result<Vec<_>>>()?;
            let reduced = locals
                .iter()
                .enumerate()
                .map(|(i, l)| reduce_local(l, &plant, &partition, i))
                .collect::<dsctl::Result<Vec<_>>>()?;
            let sizes: Vec<(usize, usize)> =
                locals.iter().zip(&reduced).map(|(l, r)| (l.state_count(), r.state_count())).collect();
            write_controllers(&output, &locals, &reduced, dot)?;
            let closed_loop = meet(&f.supervisor, &plant)?;
            let mut report = disablement_report(&closed_loop, &disabled_events(&closed_loop, &plant)?);
            if f.blocking {
                report.push_str("warning: the feasible supervisor blocks the plant\n");
            }
            report.push_str(&block_summary(&partition, &f.supervisor, &sizes));
            write_atomic(&output.join("report.txt"), &report)?;
        }
        Command::Decompose {
            sup,
            plant,
            partition,
            observation: obs,
            generalized,
            ambient,
            output,
        } => {
            let (sup, plant) = (load(&sup)?, load(&plant)?);
            let partition = load_partition(&partition)?;
            let p = observation(&obs.observable, &sup)?;
            let ambient = ambient.as_deref().map(load).transpose()?;
            let d = decompose_by_theorem1(&sup, &plant, &p, &partition, generalized, ambient.as_ref())?;
            create_dir(&output)?;
            let mut report = format!("supervisor {} states {}\n", sup.name(), sup.state_count());
            for (k, (local, spec)) in d.locals.iter().zip(&d.family.specs).enumerate() {
                write_automaton(&output.join(format!("loc_{k}.aut")), local, dot)?;
                let hidden: Vec<&str> = sup
                    .alphabet()
                    .iter()
                    .filter(|e| !spec.is_observable(&e.label))
                    .map(|e| e.label.as_str())
                    .collect();
                report.push_str(&format!(
                    "channel {k} witness {} hides {} states {}\n",
                    d.witnesses[k],
                    hidden.join(" "),
                    local.state_count()
                ));
            }
            write_atomic(&output.join("report.txt"), &report)?;
        }
        Command::Check(check) => return run_check(check),
        Command::Gen(Gen::Guideway { output }) => {
            let gw = gen_guideway();
            create_dir(&output)?;
            write_automaton(&output.join("v1.aut"), &gw.vehicles[0], dot)?;
            write_automaton(&output.join("v2.aut"), &gw.vehicles[1], dot)?;
            write_automaton(&output.join("plant.aut"), &gw.plant, dot)?;
            write_automaton(&output.join("spec.aut"), &gw.spec, dot)?;
            for p in gw.partitions.values() {
                let text = serialize_partition(p, Some(gw.plant.alphabet()));
                write_atomic(&output.join(format!("{}.part", p.name())), &text)?;
            }
        }
    }
    Ok(true)
}

fn write_controllers(dir: &Path, locals: &[Generator], reduced: &[Generator], dot: bool) -> Result<(), Failure> {
    create_dir(dir)?;
    for (k, (l, r)) in locals.iter().zip(reduced).enumerate() {
        write_automaton(&dir.join(format!("loc_{k}.aut")), l, dot)?;
        write_automaton(&dir.join(format!("loc_{k}.reduced.aut")), r, dot)?;
    }
    Ok(())
}

fn block_summary(partition: &ControlPartition, sup: &Generator, sizes: &[(usize, usize)]) -> String {
    let mut out = String::new();
    for (k, (block, (full, reduced))) in partition.blocks().iter().zip(sizes).enumerate() {
        let labels: Vec<&str> = sup
            .alphabet()
            .iter()
            .filter(|e| block.contains(&e.label))
            .map(|e| e.label.as_str())
            .collect();
        out.push_str(&format!("block {k} {} local states {full} reduced states {reduced}\n", labels.join(" ")));
    }
    out
}

fn family(channels: &Channels, k: &Generator) -> Result<ProjectionFamily, Failure> {
    if let Some(path) = &channels.partition {
        let partition = load_partition(path)?;
        partition.validate(k.alphabet())?;
        return Ok(match &channels.observable {
            Some(list) => ProjectionFamily::from_partition_observation(k.alphabet(), &partition, &observation(list, k)?),
            None => ProjectionFamily::from_partition(k.alphabet(), &partition),
        });
    }
    if channels.channels.is_empty() {
        return Err(Failure::Input("give --channel at least once or --partition".into()));
    }
    let specs = channels
        .channels
        .iter()
        .map(|c| observation(c, k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProjectionFamily::new(specs))
}

fn run_check(check: Check) -> Outcome {
    match check {
        Check::Nonblocking { input } => verdict(is_nonblocking(&load(&input)?)),
        Check::Controllable { k, plant } => verdict(is_controllable(&load(&k)?, &load(&plant)?)?),
        Check::Normal { k, plant, observation: o } => {
            let (k, plant) = (load(&k)?, load(&plant)?);
            verdict(is_normal(&k, &plant, &observation(&o.observable, &k)?)?)
        }
        Check::Paranormal { k, plant, observation: o } => {
            let (k, plant) = (load(&k)?, load(&plant)?);
            verdict(is_paranormal(&k, &plant, &observation(&o.observable, &k)?)?)
        }
        Check::Relobs {
            k,
            plant,
            observation: o,
            ambient,
        } => {
            let (k, plant) = (load(&k)?, load(&plant)?);
            let c = match ambient {
                Some(path) => load(&path)?,
                None => k.clone(),
            };
            verdict(is_relative_observable(&k, &c, &plant, &observation(&o.observable, &k)?)?)
        }
        Check::Coparanormal {
            k,
            plant,
            locals,
            channels,
        } => {
            let (k, plant) = (load(&k)?, load(&plant)?);
            let fam = family(&channels, &k)?;
            verdict(is_coparanormal(&k, &plant, &fam, &load_all(&locals)?)?)
        }
        Check::Decomposable { k, plant, channels } => {
            let (k, plant) = (load(&k)?, load(&plant)?);
            let fam = family(&channels, &k)?;
            verdict(is_decomposable(&k, &plant, &fam)?)
        }
        Check::Conormal { k, plant, channels } => {
            let (k, plant) = (load(&k)?, load(&plant)?);
            let fam = family(&channels, &k)?;
            verdict(is_conormal(&k, &plant, &fam)?)
        }
        Check::Equiv {
            plant,
            sup,
            controllers,
        } => verdict(dsctl::is_control_equivalent(&load(&plant)?, &load(&sup)?, &load_all(&controllers)?)?),
        Check::Local {
            controller,
            plant,
            block,
            within,
        } => {
            let (c, plant) = (load(&controller)?, load(&plant)?);
            let block = block.into_iter().collect();
            let holds = match within {
                Some(path) => is_local_controller_within(&c, &plant, &load(&path)?, &block)?,
                None => is_local_controller(&c, &plant, &block)?,
            };
            verdict(holds)
        }
    }
}
