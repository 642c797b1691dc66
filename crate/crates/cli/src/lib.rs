//! The `ipset` command line.
//!
//! Exit codes: 0 success, 2 verification mismatch, 3 invalid input,
//! 4 resource limit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ipset_core::automorph::{full_delta_group, generated_group, known_group, FULL_GROUP_BOUND, GENERATED_GROUP_BOUND};
use ipset_core::bounds::{predict, table1, Quantity};
use ipset_core::constructions::{
    circle_set, cross_set, crt_flatten, is_maximal_with, line_set, product_set, subfield_grid, zn_families, ZnFamily,
};
use ipset_core::io::{read_pointset_file, write_pointset, PointSetDocument, SearchReport};
use ipset_core::plane::classify_with;
use ipset_core::rings::prime_power;
use ipset_core::search::{run_search, Mode, SearchConfig};
use ipset_core::{plot, Convention, Error, PointSet, Ring, RingSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ipset", version, about = "Integral point sets over finite rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a point set from one of the explicit families.
    Construct {
        #[arg(long)]
        ring: RingSpec,
        /// line, cross, subfield, subfield-twisted, circle, circle-odd,
        /// zn:i, zn:ii, zn:iii or product.
        #[arg(long)]
        family: String,
        /// Record the nonzero-square convention in the document.
        #[arg(long)]
        quadrance: bool,
        /// For `product`: re-encode over `Z_ab` by the Chinese remainder theorem.
        #[arg(long)]
        crt: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classify a point set document.
    Verify {
        input: PathBuf,
        #[arg(long)]
        quadrance: bool,
        /// Exit with status 2 unless the set has this property.
        #[arg(long, value_enum)]
        expect: Vec<Property>,
    },
    /// Exhaustive search for a largest set of the given kind.
    Search {
        #[arg(long)]
        ring: RingSpec,
        /// integral, arc or general.
        #[arg(long)]
        mode: Mode,
        #[arg(long)]
        no_isomorph_pruning: bool,
        /// Worker threads; defaults to IPSET_THREADS or 1.
        #[arg(long)]
        parallel: Option<usize>,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long, default_value_t = 1)]
        witnesses: usize,
        #[arg(long)]
        quadrance: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Orders of the automorphism groups of the plane.
    Auto {
        #[arg(long)]
        ring: RingSpec,
    },
    /// Known value or bounds of I, Ibar or Idot.
    Bounds {
        #[arg(long)]
        ring: RingSpec,
        #[arg(long)]
        quantity: Quantity,
    },
    /// Recompute the general-position maxima over prime fields and compare
    /// them with the built-in table.
    Table {
        #[arg(long)]
        max_p: u32,
        #[arg(long)]
        parallel: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a point set on the lattice.
    Plot {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = PlotFormat::Ascii)]
        format: PlotFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Integral,
    Arc,
    General,
    Maximal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlotFormat {
    Ascii,
    Svg,
}

/// Exit status for an error raised while running a command.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(Error::BoundExceeded { .. } | Error::RingTooLarge(_)) => EXIT_LIMIT,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json(v: &impl serde::Serialize) -> anyhow::Result<String> {
    Ok(ipset_core::io::to_pretty_json(v)?)
}

fn convention(quadrance: bool) -> Convention {
    if quadrance {
        Convention::Quadrance
    } else {
        Convention::Integral
    }
}

pub fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Construct {
            ring,
            family,
            quadrance,
            crt,
            output,
        } => {
            let set = construct(&ring, &family, crt)?;
            let mut doc = PointSetDocument::from_pointset(&set).with_metadata("family", family.as_str());
            if quadrance {
                doc = doc.with_metadata("convention", "quadrance");
            }
            let mut buf = Vec::new();
            write_pointset(&mut buf, &doc)?;
            emit(output.as_deref(), std::str::from_utf8(&buf)?)?;
            log::info!("{} points over {}", set.len(), set.ring());
            Ok(EXIT_OK)
        }
        Command::Verify {
            input,
            quadrance,
            expect,
        } => {
            let doc = read_pointset_file(&input)?;
            let set = doc.to_pointset()?;
            let declared = doc.metadata.get("convention").and_then(|v| v.as_str()) == Some("quadrance");
            let conv = convention(quadrance || declared);
            let c = classify_with(&set, conv);
            let maximal = c.integral && is_maximal_with(&set, conv);
            let report = json!({
                "ring": doc.ring,
                "convention": conv,
                "size": set.len(),
                "integral": c.integral,
                "arc": c.arc,
                "general_position": c.general_position,
                "maximal": maximal,
                "max_line_multiplicity": c.max_line_multiplicity,
                "determinant_based": c.determinant_based,
            });
            emit(None, &to_json(&report)?)?;
            let ok = expect.iter().all(|p| match p {
                Property::Integral => c.integral,
                Property::Arc => c.arc,
                Property::General => c.general_position,
                Property::Maximal => maximal,
            });
            Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Search {
            ring,
            mode,
            no_isomorph_pruning,
            parallel,
            node_limit,
            witnesses,
            quadrance,
            output,
        } => {
            let mut cfg = SearchConfig::new(ring, mode);
            cfg.isomorph_pruning = !no_isomorph_pruning;
            if let Some(w) = parallel {
                cfg.parallel_width = w;
            }
            cfg.node_limit = node_limit;
            cfg.witness_limit = witnesses;
            cfg.convention = convention(quadrance);
            let res = run_search(&cfg)?;
            eprintln!(
                "best = {} ({} nodes, {} pruned, {:.2?}{})",
                res.best_cardinality,
                res.nodes_expanded,
                res.pruned_by_canon,
                res.wall_time,
                if res.complete { "" } else { ", incomplete" }
            );
            emit(output.as_deref(), &SearchReport::new(&res).to_json()?)?;
            Ok(if res.complete { EXIT_OK } else { EXIT_LIMIT })
        }
        Command::Auto { ring } => {
            let r = Ring::new(&ring)?;
            let report = automorphism_report(&r)?;
            emit(None, &to_json(&report)?)?;
            Ok(EXIT_OK)
        }
        Command::Bounds { ring, quantity } => {
            emit(None, &to_json(&predict(quantity, &ring)?)?)?;
            Ok(EXIT_OK)
        }
        Command::Table {
            max_p,
            parallel,
            output,
        } => {
            let width = parallel.unwrap_or_else(ipset_core::search::default_parallel_width);
            let known = table1();
            let mut rows = Vec::new();
            let mut diffs = 0;
            for (p, res) in ipset_core::search::recompute_table(max_p, width)? {
                let expected = known.get(&p).copied();
                let status = match expected {
                    Some(e) if e == res.best_cardinality as u64 => "ok",
                    Some(_) => {
                        diffs += 1;
                        "DIFF"
                    }
                    None => "new",
                };
                println!(
                    "p = {p:>4}  computed {:>3}  table {:>4}  {status}",
                    res.best_cardinality,
                    expected.map_or("-".to_string(), |e| e.to_string())
                );
                rows.push(json!({
                    "p": p,
                    "computed": res.best_cardinality,
                    "table": expected,
                    "nodes_expanded": res.nodes_expanded,
                    "pruned_by_canon": res.pruned_by_canon,
                }));
            }
            println!("{diffs} difference(s)");
            if let Some(path) = output {
                emit(
                    Some(&path),
                    &to_json(&json!({ "max_p": max_p, "rows": rows, "differences": diffs }))?,
                )?;
            }
            Ok(if diffs == 0 { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Plot { input, format, output } => {
            let set = read_pointset_file(&input)?.to_pointset()?;
            let text = match format {
                PlotFormat::Ascii => plot::ascii(&set),
                PlotFormat::Svg => plot::svg(&set),
            };
            emit(output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
    }
}

/// The set of `family` over `spec`.
pub fn construct(spec: &RingSpec, family: &str, crt: bool) -> anyhow::Result<PointSet> {
    let ring = Ring::new(spec)?;
    let set = match family {
        "line" => line_set(&ring),
        "cross" => cross_set(&ring)?,
        "subfield" => subfield_grid(&ring, false)?,
        "subfield-twisted" => subfield_grid(&ring, true)?,
        "circle" => circle_set(&ring, false)?,
        "circle-odd" => circle_set(&ring, true)?,
        "zn:i" | "zn:ii" | "zn:iii" => {
            let which = match family {
                "zn:i" => ZnFamily::Lattice,
                "zn:ii" => ZnFamily::Sheared,
                _ => ZnFamily::CrossCosets,
            };
            let RingSpec::ModularRing(n) = spec else {
                return Err(Error::BadSpec(format!("{family} needs a ring Zn:p^r")).into());
            };
            let (p, r) = prime_power(*n as u64).ok_or_else(|| Error::BadSpec(format!("{n} is not a prime power")))?;
            let fams = zn_families(p as u32, r)?;
            if let Some((_, why)) = fams.skipped.iter().find(|(f, _)| *f == which) {
                return Err(Error::Unsupported(format!("family {which}: {why}")).into());
            }
            fams.get(which)
                .cloned()
                .ok_or_else(|| anyhow!("family {which} missing"))?
        }
        "product" => {
            let (a, b) = ring
                .factors()
                .ok_or_else(|| Error::BadSpec(format!("product needs a ring A*B, got {ring}")))?;
            let set = product_set(&line_set(a), &line_set(b))?;
            if crt {
                crt_flatten(&set)?
            } else {
                set
            }
        }
        _ => return Err(Error::BadSpec(format!("unknown family `{family}`")).into()),
    };
    Ok(set)
}

/// Group orders that can be computed for `ring`.
pub fn automorphism_report(ring: &Ring) -> anyhow::Result<serde_json::Value> {
    let mut out = json!({ "ring": ring.spec().to_string(), "order": ring.order() });
    if ring.is_field() && ring.characteristic() == 2 {
        out["note"] = json!("every bijection preserves integral distances in characteristic 2");
        return Ok(out);
    }
    if ring.is_field() {
        let q = ring.order();
        if q <= GENERATED_GROUP_BOUND {
            let g = generated_group(ring)?;
            out["generated_group_order"] = json!(g.order);
        }
        if q <= FULL_GROUP_BOUND {
            let f = full_delta_group(ring)?;
            out["full_group_order"] = json!(f.order);
        }
        out["frobenius_powers"] = json!(ring.degree());
        out["translations"] = json!(q as u64 * q as u64);
    } else {
        out["known_group_order"] = json!(known_group(ring)?.order);
        out["translations"] = json!(ring.order() as u64 * ring.order() as u64);
    }
    Ok(out)
}
