use arrlat_cli::*;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "arrlat", version, about = "Exact line-arrangement lattices, realization spaces and pictures")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Multiple-point census and universal checks of an arrangement file
    Census { file: PathBuf },
    /// Decide whether two specs (or arrangement files) have isomorphic lattices
    Isom { a: PathBuf, b: PathBuf },
    /// Compute the moduli space of a spec
    Realize {
        spec: PathBuf,
        /// Frame lines, e.g. `1,2,5,6` or `1,2,5,6/7,3,4` with a pencil order
        #[arg(long)]
        frame: Option<String>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include the generation time in the report
        #[arg(long)]
        timestamps: bool,
    },
    /// Draw a real arrangement as SVG
    Render {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Affine window x0,y0,x1,y1
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Built-in catalog of arrangements
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List entry ids
    List,
    /// Verify one entry or `all`
    Verify {
        id: String,
        #[arg(long)]
        json: bool,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError { code: EXIT_PARSE, message: format!("{}: {e}", p.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let (res, out) = match cli.cmd {
        Cmd::Census { file } => (cmd_census(&file)?, None),
        Cmd::Isom { a, b } => (cmd_isom(&a, &b)?, None),
        Cmd::Realize { spec, frame, out, timestamps } => (cmd_realize(&spec, frame.as_deref(), timestamps)?, out),
        Cmd::Render { file, out, window } => (cmd_render(&file, window.as_deref())?, out),
        Cmd::Catalog { cmd: CatalogCmd::List } => (cmd_catalog_list()?, None),
        Cmd::Catalog { cmd: CatalogCmd::Verify { id, json } } => (cmd_catalog_verify(&id, json)?, None),
    };
    emit(&res.text, out.as_ref())?;
    Ok(res.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
