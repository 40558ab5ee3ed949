mod cache;
mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ousia::corpus::{
    apply_lens, bias_report, merge_equal_weight, merge_raw_sum, parse_zipf, zipf_from_text, ZipfDistribution,
};
use ousia::ousiogram::{self, OusiogramOptions, RenderFormat};
use ousia::ousiometer::{build_lens, export_csv_smoothed, series, smooth, TemporalCorpus};
use ousia::ousionyms::{antousionyms, synousionyms};
use ousia::{derive_from_path, Derivation, DerivedLexicon, Dimension, Error, ErrorClass, FrameworkTag, Result};

use config::{parse_width, Config};

#[derive(Parser)]
#[command(name = "ousia", version, about = "Essential-meaning analytics over VAD lexicons")]
struct Cli {
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// VAD lexicon file (overrides `lexicon_path`).
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Derivation cache directory (overrides `basis_cache_path`).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the GES and PDS bases, write the cache and print statistics.
    Derive {
        /// Lexicon file; falls back to --lexicon or the configuration.
        input: Option<PathBuf>,
        /// Output directory; falls back to --cache, the configuration, or `ousia-cache`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print derived scores for all terms or the ones given.
    Scores { terms: Vec<String> },
    /// Nearest terms to a term (syn) or to its negation (ant).
    Ousionyms {
        term: String,
        k: usize,
        #[arg(value_enum)]
        direction: Direction,
    },
    /// Build an annotated 2D histogram.
    Ousiogram {
        /// Two dimensions, e.g. `power,danger`.
        #[arg(long)]
        plane: String,
        /// Zipf files for a token-weighted histogram.
        #[arg(long = "zipf")]
        zipf: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Merge::Equal)]
        merge: Merge,
        /// Bin width, decimal or fraction such as `1/30`.
        #[arg(long)]
        bin_width: Option<String>,
        /// Arc length between boundary labels.
        #[arg(long, default_value_t = 0.1)]
        spacing: f64,
        /// Labels per internal ray.
        #[arg(long, default_value_t = 3)]
        per_ray: usize,
        #[arg(long)]
        no_annotations: bool,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Token-weighted means, medians and sign balance for a corpus.
    CorpusBias {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Merge::Equal)]
        merge: Merge,
        #[arg(long)]
        framework: Option<FrameworkTag>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Treat inputs as raw text and tokenize them.
        #[arg(long)]
        text: bool,
    },
    /// Ousiometer time series for a temporal corpus.
    Series {
        /// Directory of per-bucket Zipf files, or one `timestamp<TAB>term<TAB>count` file.
        corpus: PathBuf,
        #[arg(long, default_value = "15m")]
        resolution: String,
        /// Also admit `#term` for every 1-gram.
        #[arg(long)]
        hashtags: bool,
        /// Frameworks to include (default all).
        #[arg(long, value_delimiter = ',')]
        framework: Vec<FrameworkTag>,
        /// Smoothing windows, e.g. `1d,1h`.
        #[arg(long, value_delimiter = ',')]
        smooth: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Syn,
    Ant,
}

#[derive(Clone, Copy, ValueEnum)]
enum Merge {
    Equal,
    Raw,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

struct Ctx {
    cfg: Config,
    lexicon: Option<PathBuf>,
    cache: Option<PathBuf>,
}

impl Ctx {
    /// Scores from the cache when present, otherwise derived in process.
    fn scores(&self) -> Result<DerivedLexicon> {
        if let Some(dir) = &self.cache {
            if cache::exists(dir) {
                return cache::load(dir);
            }
        }
        match &self.lexicon {
            Some(path) => Ok(derive_from_path(path)?.scores),
            None => Err(Error::InvalidArgument(
                "no lexicon: pass --lexicon, set lexicon_path, or run `derive` into a cache".into(),
            )),
        }
    }

    fn bin_width(&self, flag: Option<&str>) -> Result<f64> {
        match flag {
            Some(t) => parse_width(t).ok_or_else(|| Error::InvalidArgument(format!("invalid bin width {t:?}"))),
            None => Ok(self.cfg.default_bin_width),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ousia: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Input => 2,
                ErrorClass::Numeric => 3,
                ErrorClass::Lookup => 4,
            })
        }
    }
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::io("<stdout>", e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let ctx = Ctx {
        lexicon: cli.lexicon.clone().or_else(|| cfg.lexicon_path.clone()),
        cache: cli.cache.clone().or_else(|| cfg.basis_cache_path.clone()),
        cfg,
    };
    match cli.command {
        Command::Derive { input, out } => {
            let input = input
                .or_else(|| ctx.lexicon.clone())
                .ok_or_else(|| Error::InvalidArgument("no lexicon file given".into()))?;
            let d = derive_from_path(&input)?;
            let report = derive_report(&d);
            let out = out
                .or_else(|| ctx.cache.clone())
                .unwrap_or_else(|| PathBuf::from("ousia-cache"));
            cache::store(&out, &d, &report)?;
            emit(&report)
        }
        Command::Scores { terms } => {
            let scores = ctx.scores()?;
            if terms.is_empty() {
                return emit(&scores.to_tsv());
            }
            let mut text = String::from(ousia::frameworks::DERIVED_HEADER);
            text.push('\n');
            for t in &terms {
                let i = scores.lookup(t).ok_or_else(|| Error::UnknownTerm(t.clone()))?;
                text.push_str(scores.term(i).as_str());
                for x in scores.row(i) {
                    let _ = write!(text, "\t{x:.6}");
                }
                text.push('\n');
            }
            emit(&text)
        }
        Command::Ousionyms { term, k, direction } => {
            let scores = ctx.scores()?;
            let list = match direction {
                Direction::Syn => synousionyms(&scores, &term, k)?,
                Direction::Ant => antousionyms(&scores, &term, k)?,
            };
            emit(&list.to_tsv(&scores))
        }
        Command::Ousiogram {
            plane,
            zipf,
            merge,
            bin_width,
            spacing,
            per_ray,
            no_annotations,
            json,
            svg,
        } => {
            let (x, y) = parse_plane(&plane)?;
            let options = OusiogramOptions {
                bin_width: ctx.bin_width(bin_width.as_deref())?,
                hull_spacing: spacing,
                n_per_ray: per_ray,
                annotate: !no_annotations,
            };
            let scores = ctx.scores()?;
            let lensed = if zipf.is_empty() {
                None
            } else {
                let merged = merge_files(&zipf, merge, false)?;
                Some(apply_lens(&merged, &scores)?)
            };
            let spec = ousiogram::build(&scores, x, y, lensed.as_ref(), &options)?;
            if let Some(p) = &svg {
                write_file(p, &ousiogram::render(&spec, RenderFormat::Svg))?;
            }
            if let Some(p) = &json {
                write_file(p, &ousiogram::render(&spec, RenderFormat::Json))?;
            }
            if svg.is_none() && json.is_none() {
                emit(&ousiogram::render_json(&spec))?;
            }
            Ok(())
        }
        Command::CorpusBias {
            files,
            merge,
            framework,
            format,
            text,
        } => {
            let scores = ctx.scores()?;
            let merged = merge_files(&files, merge, text)?;
            let lensed = apply_lens(&merged, &scores)?;
            let report = bias_report(&lensed, &scores, framework.unwrap_or(ctx.cfg.default_framework))?;
            match format {
                Format::Json => emit(&(report.to_json() + "\n")),
                Format::Table => emit(&report.to_table()),
            }
        }
        Command::Series {
            corpus,
            resolution,
            hashtags,
            framework,
            smooth: windows,
            out,
        } => {
            let resolution = parse_duration(&resolution)?;
            let corpus = if corpus.is_dir() {
                TemporalCorpus::read_dir(&corpus, resolution)?
            } else {
                let file = std::fs::File::open(&corpus).map_err(|e| Error::io(&corpus, e))?;
                TemporalCorpus::read_tsv(std::io::BufReader::new(file), resolution)?
            };
            let scores = ctx.scores()?;
            let lens = build_lens(&scores, hashtags);
            let frameworks = if framework.is_empty() {
                FrameworkTag::ALL.to_vec()
            } else {
                framework
            };
            let raw = series(&corpus, &lens, &scores, &frameworks);
            let mut smoothed = Vec::new();
            for w in windows.iter().filter(|w| !w.trim().is_empty()) {
                let secs = parse_duration(w)?;
                let set = raw.iter().map(|s| smooth(s, secs)).collect::<Result<Vec<_>>>()?;
                smoothed.push((w.trim().to_owned(), set));
            }
            let csv = export_csv_smoothed(&raw, &smoothed)?;
            match out {
                Some(p) => write_file(&p, csv.as_bytes()),
                None => emit(&csv),
            }
        }
    }
}

fn parse_plane(text: &str) -> Result<(Dimension, Dimension)> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| Error::InvalidArgument(format!("plane must be `x,y`, got {text:?}")))?;
    Ok((x.parse()?, y.parse()?))
}

fn parse_duration(text: &str) -> Result<i64> {
    let d = humantime::parse_duration(text.trim())
        .map_err(|e| Error::InvalidArgument(format!("invalid duration {text:?}: {e}")))?;
    i64::try_from(d.as_secs())
        .ok()
        .filter(|s| *s > 0 && d.subsec_nanos() == 0)
        .ok_or_else(|| Error::InvalidArgument(format!("duration {text:?} must be a positive whole number of seconds")))
}

fn read_distribution(path: &Path, text: bool) -> Result<ZipfDistribution> {
    let label = path.display().to_string();
    if text {
        let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(zipf_from_text(&body, label))
    } else {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        parse_zipf(std::io::BufReader::new(file), label)
    }
}

fn merge_files(files: &[PathBuf], merge: Merge, text: bool) -> Result<ZipfDistribution> {
    let slices = files
        .iter()
        .map(|p| read_distribution(p, text))
        .collect::<Result<Vec<_>>>()?;
    match merge {
        Merge::Equal => merge_equal_weight(&slices),
        Merge::Raw => merge_raw_sum(&slices),
    }
}

fn derive_report(d: &Derivation) -> String {
    let c = &d.correlations;
    let mut s = String::new();
    let _ = writeln!(s, "terms {}", d.scores.len());
    let _ = writeln!(s, "r_VA = {:.2}", c.r_va);
    let _ = writeln!(s, "r_AD = {:.2}", c.r_ad);
    let _ = writeln!(s, "r_VD = {:.2}", c.r_vd);
    let sv = d.ges.singular_values;
    let _ = writeln!(s, "singular values: {:.2} {:.2} {:.2}", sv[0], sv[1], sv[2]);
    for basis in [&d.ges, &d.pds] {
        let ev = basis.explained_variance.map(|x| 100.0 * x);
        let _ = writeln!(
            s,
            "explained variance {} (%): {:.2} {:.2} {:.2}",
            basis.target, ev[0], ev[1], ev[2]
        );
    }
    let sh = d.vad_variance_shares.map(|x| 100.0 * x);
    let _ = writeln!(s, "VAD variance shares (%): {:.2} {:.2} {:.2}", sh[0], sh[1], sh[2]);
    for basis in [&d.ges, &d.pds] {
        let _ = writeln!(s, "{} from VAD:", basis.target);
        for (dim, row) in basis.target.dimensions().iter().zip(basis.matrix) {
            let _ = writeln!(
                s,
                "  {:<14} {:>7.3} {:>7.3} {:>7.3}",
                dim.name(),
                row[0],
                row[1],
                row[2]
            );
        }
    }
    s
}
