use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use syncfn_core::powers::{power_terminal, state_name};
use syncfn_core::{
    check_power_equivalence, decode_msd, division_sync_with, encode_msd,
    explicit_power_with_limit, mult_add_sync, mult_sync, orbit_table, prefix_accel, prefix_fabd,
    render_cone, render_sequential, render_suffix, render_transducer, suffix_fabd, verify,
    ClosureMachine, DigitWord, DivisionBuilder, FabdParams, Layout, Machine, MapSpec, RenderSpec,
    VerifyKind,
};

#[derive(Parser)]
#[command(name = "syncfn", version, about = "Sequential transducers for n -> n/d | an+b maps")]
struct Cli {
    /// Largest machine (in states) any command may build.
    #[arg(long, env = "SYNCFN_STATE_LIMIT", default_value_t = 1_000_000, global = true)]
    state_limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct MapArgs {
    #[arg(long, default_value_t = 3)]
    a: u32,
    #[arg(long, default_value_t = 1)]
    b: u32,
    #[arg(long, default_value_t = 2)]
    d: u32,
    /// Use the accelerated map n/2 | (an+b)/2 (ignores --d).
    #[arg(long)]
    accel: bool,
}

impl MapArgs {
    fn spec(self) -> syncfn_core::Result<MapSpec> {
        if self.accel {
            MapSpec::accelerated(self.a, self.b)
        } else {
            MapSpec::general(self.a, self.b, self.d)
        }
    }
}

#[derive(Args, Clone)]
struct RenderArgs {
    #[arg(long, value_enum, default_value_t = LayoutArg::Circular)]
    layout: LayoutArg,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Omit terminal-word arrows.
    #[arg(long)]
    no_terminal: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    Circular,
    Cone,
    Layered,
}

impl RenderArgs {
    fn spec(&self) -> RenderSpec {
        RenderSpec {
            layout: match self.layout {
                LayoutArg::Circular => Layout::Circular,
                LayoutArg::Cone => Layout::Cone,
                LayoutArg::Layered => Layout::Layered,
            },
            radius_scale: self.scale,
            show_terminal: !self.no_terminal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    Mult,
    Multadd,
    Div,
    SuffixF,
    PrefixF,
    PrefixAccel,
}

#[derive(Subcommand)]
enum Command {
    /// Build one of the concrete machines and print it as JSON or DOT.
    Build {
        #[arg(value_enum)]
        kind: BuildKind,
        #[command(flatten)]
        map: MapArgs,
        /// Remainder state the division machine accepts in.
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Build the division machine with the incremental algorithm.
        #[arg(long)]
        incremental: bool,
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Compute f^n(k) with the power machine, or run a saved machine on a word.
    Eval {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, required_unless_present = "machine")]
        k: Option<BigUint>,
        /// JSON machine file (`-` for stdin).
        #[arg(long, requires = "input")]
        machine: Option<PathBuf>,
        /// Digit word fed to --machine.
        #[arg(long)]
        input: Option<String>,
    },
    /// Build f^n explicitly, optionally cross-checking it.
    Power {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        n: usize,
        /// Compare explicit, composed and oracle on 0..N.
        #[arg(long)]
        verify_bound: Option<u64>,
        #[arg(long, conflicts_with_all = ["dot", "table"])]
        json: bool,
        #[arg(long, conflicts_with = "table")]
        dot: bool,
        /// Print i, f^n(i), terminal length and terminal word per state.
        #[arg(long)]
        table: bool,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Work with the closure machine realizing every power at once.
    Closure {
        #[command(flatten)]
        map: MapArgs,
        #[command(subcommand)]
        action: ClosureAction,
    },
    /// Sweep a machine against the arithmetic oracle.
    Verify {
        #[arg(value_enum)]
        kind: VerifyArg,
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
        #[arg(long)]
        json: bool,
    },
    /// Render a JSON machine file, or closure sections 0..=N as a cone.
    Render {
        /// JSON machine file (`-` for stdin).
        #[arg(long, required_unless_present = "cone")]
        machine: Option<PathBuf>,
        /// Render closure sections 0..=N instead.
        #[arg(long)]
        cone: Option<usize>,
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Print the orbit of k with counted-step flags and the running counter.
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        k: BigUint,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum ClosureAction {
    /// f^n(k) through the closure machine.
    Eval {
        #[arg(long)]
        k: BigUint,
        #[arg(long)]
        n: usize,
    },
    /// Export section n (the explicit n-th power) with its cross arrows.
    Section {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Fixed points of f^n below the bound, with circularity witnesses.
    Cycles {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
        #[arg(long, default_value_t = 24)]
        max_witness_len: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Prefix,
    Suffix,
    Power,
    Closure,
}

impl From<VerifyArg> for VerifyKind {
    fn from(v: VerifyArg) -> Self {
        match v {
            VerifyArg::Prefix => VerifyKind::Prefix,
            VerifyArg::Suffix => VerifyKind::Suffix,
            VerifyArg::Power => VerifyKind::Power,
            VerifyArg::Closure => VerifyKind::Closure,
        }
    }
}

fn read_machine(path: &PathBuf) -> anyhow::Result<Machine> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(Machine::from_json(&text)?)
}

fn render_machine(m: &Machine, spec: &RenderSpec) -> String {
    match m {
        Machine::Transducer(t) => render_transducer(t, spec),
        Machine::Sequential(s) => render_sequential(s, spec),
        Machine::Prefix(p) => render_sequential(p.machine(), spec),
        Machine::Suffix(s) => render_suffix(s, spec),
    }
}

fn emit(m: &Machine, dot: bool, render: &RenderArgs) -> anyhow::Result<()> {
    if dot {
        print!("{}", render_machine(m, &render.spec()));
    } else {
        println!("{}", m.to_json()?);
    }
    Ok(())
}

/// Runs the command; `Ok(false)` means a verification found mismatches.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let limit = cli.state_limit;
    match cli.command {
        Command::Build { kind, map, r, incremental, json: _, dot, render } => {
            let m = match kind {
                BuildKind::Mult => Machine::Sequential(mult_sync(map.d, map.a)?),
                BuildKind::Multadd => Machine::Sequential(mult_add_sync(map.d, map.a, map.b)?),
                BuildKind::Div => {
                    let how = if incremental { DivisionBuilder::Incremental } else { DivisionBuilder::Equation };
                    Machine::Sequential(division_sync_with(map.a, map.d, r, how)?)
                }
                BuildKind::SuffixF => Machine::Suffix(suffix_fabd(FabdParams::new(map.a, map.b, map.d)?)?),
                BuildKind::PrefixF => Machine::Prefix(prefix_fabd(FabdParams::new(map.a, map.b, map.d)?)?),
                BuildKind::PrefixAccel => Machine::Prefix(prefix_accel(map.a, map.b)?),
            };
            emit(&m, dot, &render)?;
        }
        Command::Eval { map, n, k, machine, input } => {
            if let Some(path) = machine {
                let m = read_machine(&path)?;
                let out = match &m {
                    Machine::Prefix(p) => {
                        let u = DigitWord::parse(input.as_deref().unwrap_or(""), p.machine().input_base())?;
                        p.apply(u.digits())
                    }
                    Machine::Sequential(s) => {
                        let u = DigitWord::parse(input.as_deref().unwrap_or(""), s.input_base())?;
                        s.apply(u.digits())
                    }
                    Machine::Suffix(s) => {
                        let u = DigitWord::parse(input.as_deref().unwrap_or(""), s.input_base())?;
                        s.apply(u.digits())
                    }
                    Machine::Transducer(_) => bail!("eval needs a deterministic machine"),
                };
                match out {
                    Some(v) => println!("{v}"),
                    None => bail!("input rejected"),
                }
            } else {
                let spec = map.spec()?;
                let k = k.expect("clap requires --k");
                let p = explicit_power_with_limit(&spec, n, limit)?;
                let u = encode_msd(&k, spec.base())?;
                let v = p.apply(u.digits()).context("input rejected")?;
                let value = decode_msd(v.digits(), spec.base())?;
                println!("{spec}^{n}({k}) = {value}  [{u} -> {v}]");
            }
        }
        Command::Power { map, n, verify_bound, json, dot, table, render } => {
            let spec = map.spec()?;
            let p = explicit_power_with_limit(&spec, n, limit)?;
            if let Some(bound) = verify_bound {
                let report = check_power_equivalence(&spec, n, bound)?;
                eprintln!(
                    "{spec} n={n}: {} states, {} structural and {} value mismatches below {bound}",
                    report.states,
                    report.structural_mismatches.len(),
                    report.value_mismatches.len()
                );
                if !report.passed() {
                    return Ok(false);
                }
            }
            if table {
                let d = spec.divisor();
                println!("i\tstate\tf^n(i)\tlen\tterminal");
                for i in 0..p.num_states() as u64 {
                    let w = power_terminal(&spec, n, i)?;
                    let value = spec.iterate(&BigUint::from(i), n);
                    let word = DigitWord::new(spec.base(), w.clone())?;
                    println!("{i}\t{}\t{value}\t{}\t{}", state_name(i as usize, d, n), w.len(), word);
                }
            } else if dot || json || verify_bound.is_none() {
                emit(&Machine::Prefix(p), dot, &render)?;
            }
        }
        Command::Closure { map, action } => {
            let m = ClosureMachine::new(map.spec()?)?;
            match action {
                ClosureAction::Eval { k, n } => println!("{}", m.eval_integer(&k, n)?),
                ClosureAction::Section { n, dot, render } => {
                    let section = m.section_export(n, limit)?;
                    emit(&Machine::Prefix(section.machine), dot, &render)?;
                }
                ClosureAction::Cycles { n, bound, max_witness_len, json } => {
                    let cycles = m.find_cycles(n, bound, max_witness_len)?;
                    if json {
                        println!("{}", serde_json::to_string_pretty(&cycles)?);
                    } else {
                        for c in &cycles {
                            let orbit: Vec<String> = c.orbit.iter().map(ToString::to_string).collect();
                            match &c.witness {
                                Some(w) => println!(
                                    "{}: orbit {} | input {} output {} terminal {}",
                                    c.k,
                                    orbit.join(" "),
                                    w.input,
                                    w.output,
                                    w.v
                                ),
                                None => println!("{}: orbit {} | no witness", c.k, orbit.join(" ")),
                            }
                        }
                    }
                }
            }
        }
        Command::Verify { kind, map, n, bound, json } => {
            let spec = map.spec()?;
            let report = verify(kind.into(), &spec, n, bound)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                for mm in report.mismatches.iter().take(20) {
                    println!(
                        "mismatch at {}: expected {}, got {}",
                        mm.input,
                        mm.expected,
                        mm.got.as_deref().unwrap_or("rejection")
                    );
                }
                println!(
                    "{} {spec} n={} bound={}: {} mismatches in {:.3}s",
                    if report.passed() { "PASS" } else { "FAIL" },
                    report.n,
                    report.bound,
                    report.mismatches.len(),
                    report.elapsed.as_secs_f64()
                );
            }
            return Ok(report.passed());
        }
        Command::Render { machine, cone, map, render } => {
            if let Some(max_n) = cone {
                let m = ClosureMachine::new(map.spec()?)?;
                let mut spec = render.spec();
                spec.layout = Layout::Cone;
                print!("{}", render_cone(&m, max_n, &spec, limit)?);
            } else {
                let m = read_machine(&machine.expect("clap requires --machine"))?;
                print!("{}", render_machine(&m, &render.spec()));
            }
        }
        Command::Orbit { map, k, n, json } => {
            let spec = map.spec()?;
            let rows = orbit_table(&spec, &k, n);
            if json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                println!("step\tvalue\tcounted\trunning");
                for r in rows {
                    println!("{}\t{}\t{}\t{}", r.step, r.value, u8::from(r.counted), r.running);
                }
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
