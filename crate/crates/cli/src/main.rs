use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use artgallery::decomposition::{build_decomposition, GuardSiteSet, Site};
use artgallery::fixtures;
use artgallery::gallery_file::{format_number, parse_number, GalleryFile};
use artgallery::geom::Point;
use artgallery::normality::{check_normal_wrt_with, sufficient_conditions, CheckOptions, NormalityReport, Verdict};
use artgallery::polygon::SimplePolygon;
use artgallery::svg::Svg;
use artgallery::visibility::visibility_polygon;

#[derive(Parser)]
#[command(name = "artgallery", version, about = "Decide whether wall coverage forces interior coverage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Input {
    /// Built-in fixture name or path to a gallery file.
    gallery: String,
    /// `all` (the named sites), `corners`, or a comma separated list of names.
    #[arg(long, default_value = "all")]
    sites: String,
}

#[derive(Subcommand)]
enum Command {
    /// Decide normality with respect to the selected sites.
    Check {
        #[command(flatten)]
        input: Input,
        /// Decide degenerate inputs by brute force.
        #[arg(long)]
        oracle_fallback: bool,
        /// Sample grid resolution used by the brute-force fallback.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Also draw the gallery, decomposition and witness.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Print a JSON document instead of text and the key=value record.
        #[arg(long)]
        json: bool,
    },
    /// Draw a gallery as SVG.
    Render {
        #[command(flatten)]
        input: Input,
        what: Layer,
        /// Point whose view is drawn, as `x,y`.
        #[arg(long)]
        site: Option<String>,
        /// Output file; standard output otherwise.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Report the conditions that force normality for every guard set.
    Suffice {
        /// Built-in fixture name or path to a gallery file.
        gallery: String,
    },
    /// Print a random gallery in file format.
    Generate {
        kind: Kind,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        size: i64,
        /// Number of random interior sites.
        #[arg(long, default_value_t = 0)]
        m: usize,
    },
    /// List the built-in fixtures.
    Fixtures,
}

#[derive(Clone, Copy, ValueEnum)]
enum Layer {
    Gallery,
    Views,
    Decomposition,
    Sinks,
    Witness,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Polygon,
    Star,
    TwoReflex,
    Spiral,
}

struct Loaded {
    polygon: SimplePolygon,
    named: GuardSiteSet,
}

fn load(arg: &str) -> Result<Loaded> {
    if let Some(f) = fixtures::by_name(arg) {
        return Ok(Loaded { polygon: f.polygon, named: f.sites });
    }
    let path = Path::new(arg);
    if !path.exists() {
        bail!("`{arg}` is neither a fixture ({}) nor a file", fixtures::NAMES.join(", "));
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
    let file = GalleryFile::parse(&text).with_context(|| format!("parsing {arg}"))?;
    let (polygon, named) = file.build().with_context(|| format!("building {arg}"))?;
    Ok(Loaded { polygon, named })
}

fn select(g: &Loaded, how: &str) -> Result<GuardSiteSet> {
    match how {
        "all" => Ok(g.named.clone()),
        "corners" => Ok(fixtures::corner_sites(&g.polygon, &g.named)),
        list => {
            let corners = fixtures::corner_sites(&g.polygon, &g.named);
            let mut out = Vec::new();
            for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let site = g
                    .named
                    .sites()
                    .iter()
                    .chain(corners.sites())
                    .find(|s| s.name == name)
                    .ok_or_else(|| anyhow!("no site named `{name}`"))?;
                out.push(site.clone());
            }
            Ok(GuardSiteSet::new(&g.polygon, out)?)
        }
    }
}

fn parse_point(text: &str) -> Result<Point> {
    let (x, y) = text.split_once(',').ok_or_else(|| anyhow!("expected `x,y`, got `{text}`"))?;
    let x = parse_number(x.trim()).ok_or_else(|| anyhow!("bad coordinate `{x}`"))?;
    let y = parse_number(y.trim()).ok_or_else(|| anyhow!("bad coordinate `{y}`"))?;
    Ok(Point::new(x, y))
}

fn natural(names: &[String]) -> Vec<String> {
    let mut v = names.to_vec();
    v.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    v
}

fn exact(p: &Point) -> String {
    format!("({}, {})", format_number(&p.x), format_number(&p.y))
}

fn verdict_key(v: Verdict) -> &'static str {
    match v {
        Verdict::Normal => "NORMAL",
        Verdict::NotNormal => "NOT_NORMAL",
        Verdict::InconclusiveDegenerate => "INCONCLUSIVE",
    }
}

fn exit_for(v: Verdict) -> ExitCode {
    ExitCode::from(match v {
        Verdict::Normal => 0,
        Verdict::NotNormal => 1,
        Verdict::InconclusiveDegenerate => 2,
    })
}

fn record(r: &NormalityReport, sites: &GuardSiteSet) -> Vec<(String, String)> {
    let mut out = vec![
        ("verdict".to_string(), verdict_key(r.verdict).to_string()),
        ("sites".to_string(), sites.len().to_string()),
        ("regions".to_string(), r.stats.regions.to_string()),
        ("sinks".to_string(), r.stats.sinks.to_string()),
        ("sinks_checked".to_string(), r.stats.checked.to_string()),
        ("via_oracle".to_string(), r.via_oracle.to_string()),
    ];
    if let Some(w) = &r.witness {
        out.push(("witness".into(), natural(&w.names).join(",")));
        out.push(("uncovered_x".into(), format_number(&w.uncovered_point.x)));
        out.push(("uncovered_y".into(), format_number(&w.uncovered_point.y)));
        out.push(("witness_on_boundary".into(), w.all_on_boundary.to_string()));
    }
    if let Some(d) = &r.degeneracy {
        if !d.is_ok() {
            out.push(("degeneracy".into(), d.to_string()));
        }
    }
    let ms = |d: std::time::Duration| format!("{:.3}", d.as_secs_f64() * 1e3);
    out.push(("ms_decomposition".into(), ms(r.timings.decomposition)));
    out.push(("ms_wall_views".into(), ms(r.timings.wall_views)));
    out.push(("ms_sinks".into(), ms(r.timings.sinks)));
    out.push(("ms_oracle".into(), ms(r.timings.oracle)));
    out
}

fn draw_witness(poly: &SimplePolygon, sites: &GuardSiteSet, r: &NormalityReport) -> String {
    let mut svg = Svg::new(poly);
    if let Ok(d) = build_decomposition(poly, sites) {
        svg.decomposition(&d, sites, true);
    }
    svg.sites(sites);
    if let Some(w) = &r.witness {
        svg.witness(w, sites);
    }
    svg.finish()
}

fn check(input: &Input, oracle_fallback: bool, grid: usize, svg: Option<&Path>, as_json: bool) -> Result<ExitCode> {
    let g = load(&input.gallery)?;
    let sites = select(&g, &input.sites)?;
    let opts = CheckOptions { oracle_fallback, grid, ..CheckOptions::default() };
    let r = check_normal_wrt_with(&g.polygon, &sites, opts);

    let rec = record(&r, &sites);
    if as_json {
        let map: serde_json::Map<String, serde_json::Value> =
            rec.into_iter().map(|(k, v)| (k, serde_json::Value::String(v))).collect();
        let doc = json!({ "gallery": input.gallery, "record": map, "notes": r.notes });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("{}", r.verdict);
        if let Some(w) = &r.witness {
            println!("witness: {{{}}}", natural(&w.names).join(","));
            println!("uncovered point: {}", exact(&w.uncovered_point));
        }
        if let Some(d) = &r.degeneracy {
            if !d.is_ok() {
                println!("degeneracy: {d}");
            }
        }
        for n in &r.notes {
            println!("note: {n}");
        }
        for (k, v) in rec {
            println!("{k}={v}");
        }
    }
    if let Some(path) = svg {
        fs::write(path, draw_witness(&g.polygon, &sites, &r)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(exit_for(r.verdict))
}

fn render(input: &Input, what: Layer, site: Option<&str>, out: Option<&Path>) -> Result<ExitCode> {
    let g = load(&input.gallery)?;
    let sites = select(&g, &input.sites)?;
    let doc = match what {
        Layer::Gallery => Svg::new(&g.polygon).sites(&sites).finish(),
        Layer::Views => {
            let points = match site {
                Some(s) => vec![parse_point(s)?],
                None => sites.points(),
            };
            let mut svg = Svg::new(&g.polygon);
            for p in &points {
                let v = visibility_polygon(&g.polygon, p).map_err(|e| anyhow!("view of {}: {e}", exact(p)))?;
                svg.view(&g.polygon, &v);
            }
            if site.is_none() {
                svg.sites(&sites);
            }
            svg.finish()
        }
        Layer::Decomposition | Layer::Sinks => {
            let d = build_decomposition(&g.polygon, &sites)?;
            Svg::new(&g.polygon).decomposition(&d, &sites, matches!(what, Layer::Sinks)).sites(&sites).finish()
        }
        Layer::Witness => {
            let r = check_normal_wrt_with(&g.polygon, &sites, CheckOptions::default());
            if r.verdict != Verdict::NotNormal {
                bail!("no witness to draw: {}", r.verdict);
            }
            draw_witness(&g.polygon, &sites, &r)
        }
    };
    match out {
        Some(path) => fs::write(path, doc).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{doc}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn suffice(gallery: &str) -> Result<ExitCode> {
    let g = load(gallery)?;
    let s = sufficient_conditions(&g.polygon);
    println!("reflex corners <= 2: {}", yes(s.reflex_le_2));
    match &s.kernel_point {
        Some(p) => println!("star: yes (kernel point {})", exact(p)),
        None => println!("star: no"),
    }
    match &s.certificate {
        Some(c) => {
            let pts: Vec<String> = c.iter().map(exact).collect();
            println!("convex-cover: yes (views of {})", pts.join(", "));
        }
        None => println!("convex-cover: no"),
    }
    if s.implies_normal {
        println!("=> normal for every guard set");
    } else {
        println!("=> inconclusive by sufficient tests");
    }
    Ok(ExitCode::SUCCESS)
}

fn generate(kind: Kind, n: usize, seed: u64, size: i64, m: usize) -> Result<ExitCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poly = match kind {
        Kind::Polygon => fixtures::random_polygon(&mut rng, n.max(3), size),
        Kind::Star => fixtures::random_star(&mut rng, n.max(4), size),
        Kind::TwoReflex => fixtures::random_two_reflex(&mut rng, n.max(5), size),
        Kind::Spiral => fixtures::spiral(n),
    };
    let sites = if m > 0 {
        fixtures::random_sites(&mut rng, &poly, m, 4).ok_or_else(|| anyhow!("could not place {m} sites in general position"))?
    } else {
        GuardSiteSet::new(&poly, Vec::<Site>::new())?
    };
    print!("{}", GalleryFile::from_gallery(&poly, &sites));
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check { input, oracle_fallback, grid, svg, json } => {
            check(&input, oracle_fallback, grid, svg.as_deref(), json)
        }
        Command::Render { input, what, site, svg } => render(&input, what, site.as_deref(), svg.as_deref()),
        Command::Suffice { gallery } => suffice(&gallery),
        Command::Generate { kind, n, seed, size, m } => generate(kind, n, seed, size, m),
        Command::Fixtures => {
            for name in fixtures::NAMES {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
