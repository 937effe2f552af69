use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shepard_bernoulli::bench::{
    generate_nodes, load_model, run_benchmark, save_model, write_plot, write_report, BenchParams, NodeFile, NodeKind,
    NodeSpec, Operator, TestFunction,
};
use shepard_bernoulli::{Config, Error, Fallback, GridSpec, Interpolant, JetSource, Mode, NodalData, NodeSet};

#[derive(Parser)]
#[command(name = "shepbern", version, about = "Shepard-Bernoulli scattered data interpolation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a node set, optionally sampling a test function on it.
    GenNodes(GenNodes),
    /// Fit an interpolant to a node file and store it as a model bundle.
    Fit(Fit),
    /// Evaluate a stored model on a rectangular grid.
    Eval(Eval),
    /// Run the error benchmark over operators, test functions and node counts.
    Bench(Bench),
}

#[derive(Args)]
struct GenNodes {
    #[arg(long, default_value = "uniform-random")]
    kind: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Test function id (1-10) to sample at the nodes.
    #[arg(long)]
    function: Option<usize>,
    /// Write only values, not first and second partials.
    #[arg(long, requires = "function")]
    values_only: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Fit {
    #[arg(long)]
    nodes: PathBuf,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value = "bernoulli")]
    mode: String,
    /// analytic, wls-quadratic or wls-cubic
    #[arg(long, default_value = "wls-quadratic")]
    jet_source: String,
    #[arg(long, default_value_t = 9)]
    n_w: usize,
    #[arg(long)]
    n_q: Option<usize>,
    #[arg(long, default_value_t = 2.0)]
    mu: f64,
    /// error or nearest
    #[arg(long, default_value = "nearest")]
    fallback: String,
    #[arg(long)]
    out_model: PathBuf,
}

#[derive(Args)]
struct Eval {
    #[arg(long)]
    model: PathBuf,
    /// Grid size as nx,ny.
    #[arg(long, default_value = "100,100")]
    grid: String,
    #[arg(long, default_value = "0,1")]
    x_range: String,
    #[arg(long, default_value = "0,1")]
    y_range: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Bench {
    /// Function ids as a list (1,4,7) or range (1..10).
    #[arg(long, default_value = "1..10")]
    functions: String,
    #[arg(long, default_value = "sb3,st2,bshep32,bshep33,qshep2d")]
    operators: String,
    #[arg(long, default_value = "202,777,2991")]
    n: String,
    #[arg(long, default_value = "uniform-random")]
    kind: String,
    #[arg(long, default_value_t = 9)]
    n_w: usize,
    /// Neighbourhood sizes for the quadratic and cubic fits; one value sets both.
    #[arg(long, default_value = "13,17")]
    n_q: String,
    #[arg(long, default_value_t = 2.0)]
    mu: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "100,100")]
    grid: String,
    #[arg(long)]
    out: PathBuf,
    /// Also write a (function, n, operator, max_abs) table for plotting.
    #[arg(long)]
    plot_out: Option<PathBuf>,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| Error::Argument(format!("bad {what} '{t}'"))))
        .collect()
}

fn parse_pair<T: std::str::FromStr + Copy>(s: &str, what: &str) -> Result<(T, T), Error> {
    match parse_list::<T>(s, what)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::Argument(format!("{what} needs two comma-separated values, got '{s}'"))),
    }
}

fn parse_functions(s: &str) -> Result<Vec<TestFunction>, Error> {
    let ids: Vec<usize> = match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = parse_pair::<usize>(&format!("{a},{b}"), "function range")?;
            (a..=b).collect()
        }
        None => parse_list(s, "function id")?,
    };
    ids.into_iter().map(TestFunction::new).collect()
}

fn grid_spec(grid: &str, x_range: (f64, f64), y_range: (f64, f64)) -> Result<GridSpec, Error> {
    let (nx, ny) = parse_pair::<usize>(grid, "grid")?;
    let spec = GridSpec { x_range, y_range, nx, ny };
    spec.validate()?;
    Ok(spec)
}

fn gen_nodes(args: GenNodes) -> Result<(), Error> {
    let kind: NodeKind = args.kind.parse()?;
    let nodes = generate_nodes(kind, args.n, args.seed)?;
    let mut file = NodeFile { points: nodes.points().to_vec(), ..Default::default() };
    if let Some(id) = args.function {
        let f = TestFunction::new(id)?;
        file.values = Some(nodes.points().iter().map(|p| f.eval(*p)).collect());
        if !args.values_only {
            file.derivs = Some(
                nodes
                    .points()
                    .iter()
                    .map(|p| {
                        let j = f.jet(*p, 2)?;
                        Ok([j.table()[1], j.table()[2], j.table()[3], j.table()[4], j.table()[5]])
                    })
                    .collect::<Result<_, Error>>()?,
            );
        }
    }
    file.save(&args.out)
}

fn fit(args: Fit) -> Result<(), Error> {
    let file = NodeFile::load(&args.nodes)?;
    let mode: Mode = args.mode.parse()?;
    let jet_source: JetSource = args.jet_source.parse()?;
    let config = Config {
        degree: args.m,
        mu: args.mu,
        n_w: args.n_w,
        n_q: args.n_q,
        mode,
        jet_source,
        fallback: args.fallback.parse::<Fallback>()?,
    };
    config.validate()?;
    let data = match jet_source {
        JetSource::Analytic => NodalData::Jets(file.jets()?),
        _ => NodalData::Values(
            file.values.clone().ok_or_else(|| Error::Argument("node file has no value column".into()))?,
        ),
    };
    let interp = Interpolant::build(NodeSet::new(file.points)?, data, &config)?;
    save_model(&args.out_model, &interp)
}

fn eval(args: Eval) -> Result<(), Error> {
    let grid = grid_spec(&args.grid, parse_pair(&args.x_range, "x range")?, parse_pair(&args.y_range, "y range")?)?;
    let interp = load_model(&args.model)?;
    let values = interp.eval_grid(&grid)?;
    let mut out = csv::Writer::from_path(&args.out)?;
    out.write_record(["x", "y", "value"])?;
    for row in 0..grid.ny {
        for col in 0..grid.nx {
            let p = grid.point(col, row);
            out.write_record([p.x.to_string(), p.y.to_string(), values[row * grid.nx + col].to_string()])?;
        }
    }
    out.flush()?;
    Ok(())
}

fn bench(args: Bench) -> Result<(), Error> {
    let functions = parse_functions(&args.functions)?;
    let operators: Vec<Operator> = parse_list::<String>(&args.operators, "operator")?
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_, _>>()?;
    let counts: Vec<usize> = parse_list(&args.n, "node count")?;
    let kind: NodeKind = args.kind.parse()?;
    let (n_q_quadratic, n_q_cubic) = match parse_list::<usize>(&args.n_q, "n_q")?.as_slice() {
        [q] => (*q, *q),
        [q, c] => (*q, *c),
        _ => return Err(Error::Argument("n_q takes one or two values".into())),
    };
    let params = BenchParams { n_w: args.n_w, n_q_quadratic, n_q_cubic, mu: args.mu };
    let grid = grid_spec(&args.grid, (0.0, 1.0), (0.0, 1.0))?;
    let mut rows = Vec::new();
    for n in counts {
        let spec = NodeSpec { kind, n, seed: args.seed };
        rows.extend(run_benchmark(&operators, &functions, &spec, &grid, &params)?);
    }
    for r in &rows {
        match &r.error {
            None => eprintln!("{:>8} f{:<2} N={:<5} max {:.3e} rms {:.3e}", r.operator, r.function, r.n, r.max_abs, r.rms),
            Some(e) => eprintln!("{:>8} f{:<2} N={:<5} failed: {e}", r.operator, r.function, r.n),
        }
    }
    write_report(fs::File::create(&args.out)?, &rows)?;
    if let Some(path) = &args.plot_out {
        write_plot(fs::File::create(path)?, &rows)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::GenNodes(a) => gen_nodes(a),
        Command::Fit(a) => fit(a),
        Command::Eval(a) => eval(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("shepbern: {e}");
            ExitCode::from(if e.is_argument() || matches!(e, Error::Io(_)) { 2 } else { 3 })
        }
    }
}
