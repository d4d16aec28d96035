//! The `rdb2owl` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::audit::{audit, ontology_metrics, paper_comparison, OntologyMetrics, PluginFixture};
use crate::ddl::{has_errors, parse_ddl_bytes, parse_ddl_document, parse_inserts_ignoring, ParseDiagnostic};
use crate::emit::{emit, read_model_json, EmitFormat};
use crate::mapping::{check_base_iri, map_schema, MappingOptions, Naming, DEFAULT_BASE_IRI};
use crate::relational::{RelationalSchema, Tuple};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rdb2owl", version, about = "Compile relational schemas into OWL ontologies and audit ontologies against the mapping rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Rdfxml,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Plugin {
    DataMaster,
    OntoBase,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Map a schema (and optional rows) to an ontology.
    Convert {
        schema: PathBuf,
        /// INSERT statements to map to individuals.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Output file (standard output when absent).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "rdfxml")]
        format: Format,
        /// Name datatype properties after the column only.
        #[arg(long)]
        bare_names: bool,
        #[arg(long)]
        no_cardinalities: bool,
        #[arg(long)]
        no_individuals: bool,
        #[arg(long, default_value = DEFAULT_BASE_IRI, value_parser = parse_base_iri)]
        base_iri: String,
        /// Drop a table before mapping; may be repeated.
        #[arg(long = "ignore-table", value_name = "NAME")]
        ignore_tables: Vec<String>,
    },
    /// Compare an ontology's component counts with what the rules predict.
    #[command(group(ArgGroup::new("observed").required(true).args(["model", "metrics", "plugin"])))]
    Audit {
        schema: PathBuf,
        #[arg(long)]
        data: Option<PathBuf>,
        /// Ontology model written by `convert --format json`.
        #[arg(long)]
        model: Option<PathBuf>,
        /// classes,datatype-props,object-props,individuals,restrictions,subclass-edges
        /// (`-` for unknown subclass edges).
        #[arg(long, value_parser = parse_metrics, allow_hyphen_values = true)]
        metrics: Option<OntologyMetrics>,
        /// Use the recorded counts of a plug-in.
        #[arg(long, value_enum)]
        plugin: Option<Plugin>,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the database vs. plug-in vs. rdb2owl component counts.
    ComparePaper {
        #[arg(long)]
        csv: bool,
    },
}

fn parse_base_iri(s: &str) -> Result<String, String> {
    check_base_iri(s).map(|()| s.to_string())
}

fn parse_metrics(s: &str) -> Result<OntologyMetrics, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!("expected 6 comma-separated counts, found {}", parts.len()));
    }
    let n = |i: usize| parts[i].parse::<usize>().map_err(|_| format!("`{}` is not a count", parts[i]));
    Ok(OntologyMetrics {
        classes: n(0)?,
        datatype_properties: n(1)?,
        object_properties: n(2)?,
        individuals: n(3)?,
        restrictions: n(4)?,
        subclass_edges: if parts[5] == "-" { None } else { Some(n(5)?) },
    })
}

/// A failure already reported to standard error.
struct Failed;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn error(&mut self, message: impl AsRef<str>) -> Failed {
        let _ = writeln!(self.err, "error: {}", message.as_ref());
        Failed
    }

    fn warn(&mut self, message: impl AsRef<str>) {
        let _ = writeln!(self.err, "warning: {}", message.as_ref());
    }

    fn diagnostics(&mut self, file: &Path, diagnostics: &[ParseDiagnostic]) {
        let name = file.display().to_string();
        for d in diagnostics {
            let _ = writeln!(self.err, "{}", d.render(&name));
        }
    }

    fn read(&mut self, path: &Path) -> Result<Vec<u8>, Failed> {
        std::fs::read(path).map_err(|e| self.error(format!("cannot read `{}`: {e}", path.display())))
    }

    fn write(&mut self, output: Option<&Path>, bytes: &[u8]) -> Result<(), Failed> {
        match output {
            Some(path) => std::fs::write(path, bytes)
                .map_err(|e| self.error(format!("cannot write `{}`: {e}", path.display()))),
            None => self.out.write_all(bytes).map_err(|e| self.error(format!("cannot write output: {e}"))),
        }
    }

    fn load_schema(&mut self, path: &Path, ignore: &[String]) -> Result<RelationalSchema, Failed> {
        let bytes = self.read(path)?;
        let text = match String::from_utf8(bytes) {
            Ok(t) => t,
            Err(e) => {
                let parsed = parse_ddl_bytes(e.as_bytes());
                self.diagnostics(path, &parsed.diagnostics);
                return Err(Failed);
            }
        };
        let mut doc = parse_ddl_document(&text);
        for name in ignore {
            if !doc.remove_table(name) {
                self.warn(format!("--ignore-table `{name}`: no such table"));
            }
        }
        let parsed = doc.validate();
        self.diagnostics(path, &parsed.diagnostics);
        parsed.schema.ok_or(Failed)
    }

    fn load_rows(&mut self, path: Option<&Path>, schema: &RelationalSchema, ignore: &[String]) -> Result<Vec<Tuple>, Failed> {
        let Some(path) = path else { return Ok(Vec::new()) };
        let bytes = self.read(path)?;
        let Ok(text) = String::from_utf8(bytes) else {
            return Err(self.error(format!("`{}` is not valid UTF-8", path.display())));
        };
        let parsed = parse_inserts_ignoring(&text, schema, ignore);
        self.diagnostics(path, &parsed.diagnostics);
        if has_errors(&parsed.diagnostics) {
            return Err(Failed);
        }
        Ok(parsed.tuples)
    }
}

/// Runs the command line in `args` (program name first) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let mut io = Io { out, err };
    match execute(cli.command, &mut io) {
        Ok(()) => EXIT_OK,
        Err(Failed) => EXIT_DIAGNOSTICS,
    }
}

fn execute(command: Command, io: &mut Io<'_>) -> Result<(), Failed> {
    match command {
        Command::Convert {
            schema,
            data,
            output,
            format,
            bare_names,
            no_cardinalities,
            no_individuals,
            base_iri,
            ignore_tables,
        } => {
            let s = io.load_schema(&schema, &ignore_tables)?;
            let rows = io.load_rows(data.as_deref(), &s, &ignore_tables)?;
            let opts = MappingOptions {
                base_iri,
                naming: if bare_names { Naming::Bare } else { Naming::Qualified },
                emit_cardinalities: !no_cardinalities,
                emit_individuals: !no_individuals,
            };
            let mapping = map_schema(&s, &rows, &opts).map_err(|e| io.error(e.to_string()))?;
            for w in &mapping.warnings {
                io.warn(w);
            }
            let fmt = match format {
                Format::Rdfxml => EmitFormat::RdfXml,
                Format::Json => EmitFormat::ModelJson,
            };
            io.write(output.as_deref(), &emit(&mapping.model, fmt))
        }
        Command::Audit { schema, data, model, metrics, plugin, report, output } => {
            let s = io.load_schema(&schema, &[])?;
            let rows = io.load_rows(data.as_deref(), &s, &[])?;
            let observed = if let Some(path) = model {
                let bytes = io.read(&path)?;
                let m = read_model_json(&bytes).map_err(|e| io.error(format!("{}: {e}", path.display())))?;
                ontology_metrics(&m)
            } else if let Some(m) = metrics {
                m
            } else {
                match plugin.expect("clap requires one source") {
                    Plugin::DataMaster => PluginFixture::data_master().ontology_metrics,
                    Plugin::OntoBase => PluginFixture::onto_base().ontology_metrics,
                }
            };
            let r = audit(&s, &rows, &observed);
            let text = match report {
                ReportFormat::Json => r.to_json(),
                ReportFormat::Text => r.to_text(),
            };
            io.write(output.as_deref(), text.as_bytes())
        }
        Command::ComparePaper { csv } => {
            let table = paper_comparison();
            let text = if csv { table.to_csv() } else { table.to_text() };
            io.write(None, text.as_bytes())
        }
    }
}
