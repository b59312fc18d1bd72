use std::collections::BTreeMap;
use std::fs;

use serde_json::{json, Map, Value};

use morsekit::flow::{
    descending_cell_census, format_number, integrate, sample_start, trajectory_csv, Classifier, Direction, FlowOptions,
};
use morsekit::resolution::{bs_max_check, resolve_cs, resolve_grass, resolve_so, Line, OrientedPlane};
use morsekit::symfunc::{grass_relations, partitions, reduce, structure_constants, Partition, RingSpec};
use morsekit::{Field, Label, Manifold, ManifoldKind, ManifoldPoint, MorseSetup, Ring};

use crate::args::*;
use crate::render::{self, compact, csv_label, csv_row};
use crate::{CliError, Report};

type Result<T> = std::result::Result<T, CliError>;

pub fn execute(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::CriticalPoints(o) => critical_points(o),
        Command::IndexCheck(o) => index_check(o),
        Command::Betti(o) => betti(o),
        Command::Flow(o) => flow(o),
        Command::Census(o) => census(o),
        Command::Resolve(o) => resolve(o),
        Command::BsCheck(o) => bs_check(o),
        Command::Product(o) => product(o),
        Command::PoincareConsistency(o) => poincare_consistency(o),
    }
}

fn ok(body: String) -> Report {
    Report { body, failed: false }
}

fn parse_list(flag: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--{flag}: not a number: {t:?}")))
        })
        .collect()
}

fn no_csv(format: Format, cmd: &str) -> Result<()> {
    if format == Format::Csv {
        return Err(CliError::Usage(format!("{cmd} has no CSV output; use json or text")));
    }
    Ok(())
}

fn build_manifold(kind: Kind, n: usize, k: Option<usize>, spectrum: Option<&str>) -> Result<Manifold> {
    if k.is_some() && kind != Kind::Grass {
        return Err(CliError::Usage("--k applies only to the Grassmannian".into()));
    }
    if spectrum.is_some() && kind != Kind::Flag {
        return Err(CliError::Usage("--spectrum applies only to the flag manifold".into()));
    }
    Ok(match kind {
        Kind::Orth => Manifold::orth(n, Field::Real)?,
        Kind::Unitary => Manifold::unitary(n)?,
        Kind::Symplectic => Manifold::symplectic(n)?,
        Kind::So => Manifold::special_orth(n)?,
        Kind::Grass => {
            let k = k.ok_or_else(|| CliError::Usage("the Grassmannian needs --k".into()))?;
            Manifold::grass(n, k)?
        }
        Kind::Lagrangian => Manifold::lagrangian(n)?,
        Kind::Cs => Manifold::cplx_str(n)?,
        Kind::Flag => match spectrum {
            Some(s) => {
                let values = parse_list("spectrum", s)?;
                if values.len() != n {
                    return Err(CliError::Usage(format!("--spectrum needs {n} values, got {}", values.len())));
                }
                Manifold::flag(values)?
            }
            None => Manifold::flag_default(n)?,
        },
    })
}

fn build_setup(o: &SpaceOpts) -> Result<MorseSetup> {
    let m = build_manifold(o.manifold, o.n, o.k, o.spectrum.as_deref())?;
    match &o.lambda {
        None => Ok(MorseSetup::new(m)?),
        Some(_) if o.manifold == Kind::Flag => Err(CliError::Usage(
            "the flag manifold's focal point is fixed by --spectrum".into(),
        )),
        Some(s) => Ok(MorseSetup::with_lambda(m, parse_list("lambda", s)?)?),
    }
}

fn space_manifold(space: Space, n: usize, k: Option<usize>) -> Result<Manifold> {
    let kind = match space {
        Space::So => Kind::So,
        Space::Grass => Kind::Grass,
        Space::Cs => Kind::Cs,
    };
    build_manifold(kind, n, k, None)
}

fn parse_label(s: &str) -> Result<Label> {
    Ok(Label::parse(s)?)
}

fn header(setup: &MorseSetup) -> Map<String, Value> {
    let m = setup.manifold();
    let mut obj = Map::new();
    obj.insert("manifold".into(), json!(m.to_string()));
    obj.insert("dim".into(), json!(m.dim()));
    obj.insert("lambda".into(), json!(setup.lambda()));
    obj
}

fn critical_points(o: &SpaceOpts) -> Result<Report> {
    let setup = build_setup(o)?;
    let m = setup.manifold();
    let mut records = Vec::new();
    for c in setup.enumerate_critical()? {
        let f = setup.f_value(&c.point)?;
        let component = m.component_sign(c.point.matrix())?;
        records.push((c.label.to_string(), c.index, f, component));
    }
    let body = match o.format {
        Format::Json => {
            let mut obj = header(&setup);
            let list: Vec<Value> = records
                .iter()
                .map(|(l, i, f, s)| json!({"label": l, "index": i, "f": f, "component": s}))
                .collect();
            obj.insert("critical_points".into(), Value::Array(list));
            compact(&Value::Object(obj))
        }
        Format::Csv => {
            let mut s = csv_row(&["label", "index", "f", "component"]);
            for (l, i, f, c) in &records {
                s += &csv_row(&[csv_label(l), i.to_string(), format_number(*f), c.to_string()]);
            }
            s
        }
        Format::Text => {
            let mut s = format!("{}: {} critical points, dimension {}\n", m, records.len(), m.dim());
            for (l, i, f, _) in &records {
                s += &format!("{l:<14} index {i:>3}  f = {f}\n");
            }
            s
        }
    };
    Ok(ok(body))
}

fn index_check(o: &IndexCheckOpts) -> Result<Report> {
    no_csv(o.space.format, "index-check")?;
    let setup = build_setup(&o.space)?;
    let mut rows = Vec::new();
    let mut all_agree = true;
    for c in setup.enumerate_critical()? {
        let row = match setup.index_numeric_with(&c, o.degeneracy_rel) {
            Ok(num) => {
                let agree = num.index == c.index;
                all_agree &= agree;
                json!({
                    "label": c.label.to_string(),
                    "index_closed": c.index,
                    "index_numeric": num.index,
                    "agree": agree,
                    "min_abs_eigenvalue": num.min_abs_eigenvalue(),
                    "spectral_radius": num.spectral_radius(),
                    "threshold": num.threshold,
                })
            }
            Err(e @ morsekit::Error::Degenerate { .. }) => {
                all_agree = false;
                json!({
                    "label": c.label.to_string(),
                    "index_closed": c.index,
                    "index_numeric": Value::Null,
                    "agree": false,
                    "error": e.to_string(),
                })
            }
            Err(e) => return Err(e.into()),
        };
        rows.push(row);
    }
    let body = match o.space.format {
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                s += &format!(
                    "{:<14} closed {:>3}  numeric {:>4}  {}\n",
                    r["label"].as_str().unwrap_or_default(),
                    r["index_closed"],
                    r["index_numeric"],
                    if r["agree"] == json!(true) { "ok" } else { "MISMATCH" }
                );
            }
            s += if all_agree { "all indices agree\n" } else { "index check failed\n" };
            s
        }
        _ => {
            let mut obj = header(&setup);
            obj.insert("all_agree".into(), json!(all_agree));
            obj.insert("critical_points".into(), Value::Array(rows));
            compact(&Value::Object(obj))
        }
    };
    Ok(Report {
        body,
        failed: !all_agree,
    })
}

fn betti(o: &BettiOpts) -> Result<Report> {
    no_csv(o.space.format, "betti")?;
    let setup = build_setup(&o.space)?;
    let m = setup.manifold();
    let ring = match o.ring {
        Some(RingArg::Z) => Ring::Z,
        Some(RingArg::Z2) => Ring::Z2,
        None => match m.kind() {
            ManifoldKind::Orth { field: Field::Real, .. }
            | ManifoldKind::SpecialOrth { .. }
            | ManifoldKind::Lagrangian { .. } => Ring::Z2,
            _ => Ring::Z,
        },
    };
    let p = setup.poincare(ring)?;
    let by = setup.poincare_by_component(ring)?;
    let chi = setup.euler_characteristic()?;
    let body = match o.space.format {
        Format::Text => {
            let mut s = format!("P_{m}(t; {ring}) = {p}\neuler characteristic {chi}\n");
            if by.len() > 1 {
                for (sign, q) in &by {
                    s += &format!("component {sign:+}: {q}\n");
                }
            }
            s
        }
        _ => {
            let mut obj = header(&setup);
            obj.insert("ring".into(), json!(ring.to_string()));
            obj.insert("poincare".into(), json!(p.coeffs));
            obj.insert("polynomial".into(), json!(p.to_string()));
            obj.insert("total".into(), json!(p.total()));
            obj.insert("euler_characteristic".into(), json!(chi));
            let comps: Vec<Value> = by
                .iter()
                .map(|(sign, q)| json!({"component": sign, "poincare": q.coeffs, "polynomial": q.to_string()}))
                .collect();
            obj.insert("components".into(), Value::Array(comps));
            compact(&Value::Object(obj))
        }
    };
    Ok(ok(body))
}

fn flow(o: &FlowOpts) -> Result<Report> {
    let setup = build_setup(&o.space)?;
    let direction = match o.direction {
        DirectionArg::Ascending => Direction::Ascending,
        DirectionArg::Descending => Direction::Descending,
    };
    let opts = FlowOptions {
        dt: o.dt,
        max_t: o.tmax,
        grad_stop: o.grad_stop,
        ..FlowOptions::default()
    };
    let x0 = sample_start(&setup, o.seed, 0);
    let (traj, res) = integrate(&setup, &x0, direction, &opts)?;
    let csv = trajectory_csv(&traj);
    if let Some(path) = &o.out {
        fs::write(path, &csv)?;
    }
    let limit = match &res.limit_label {
        Some(l) => json!({"label": l.to_string(), "index": setup.index_closed(l)?}),
        None => Value::Null,
    };
    let summary = || {
        let mut obj = header(&setup);
        obj.insert("seed".into(), json!(o.seed));
        obj.insert("direction".into(), json!(format!("{direction:?}").to_lowercase()));
        obj.insert("dt".into(), json!(o.dt));
        obj.insert("steps".into(), json!(res.steps));
        obj.insert("t_end".into(), json!(traj.times.last().copied().unwrap_or(0.0)));
        obj.insert("f_start".into(), json!(traj.f_values.first().copied().unwrap_or(f64::NAN)));
        obj.insert("f_end".into(), json!(traj.f_values.last().copied().unwrap_or(f64::NAN)));
        obj.insert("converged".into(), json!(res.converged));
        obj.insert("final_grad_norm".into(), json!(res.final_grad_norm));
        obj.insert("final_distance".into(), json!(res.final_distance));
        obj.insert("limit".into(), limit.clone());
        Value::Object(obj)
    };
    let body = match (o.space.format, &o.out) {
        (Format::Csv, None) => csv,
        (Format::Text, _) => format!(
            "{} steps to t = {}: f {} -> {}, |grad| {:e}, limit {}\n",
            res.steps,
            traj.times.last().copied().unwrap_or(0.0),
            traj.f_values[0],
            traj.f_values.last().copied().unwrap_or(f64::NAN),
            res.final_grad_norm,
            res.limit_label.as_ref().map_or("none".to_string(), |l| l.to_string())
        ),
        _ => compact(&summary()),
    };
    Ok(Report {
        body,
        failed: !res.converged,
    })
}

fn census(o: &CensusOpts) -> Result<Report> {
    no_csv(o.space.format, "census")?;
    let setup = build_setup(&o.space)?;
    let opts = FlowOptions {
        dt: o.dt,
        max_t: o.tmax,
        ..FlowOptions::default()
    };
    let census = descending_cell_census(&setup, o.samples, o.seed, &opts)?;
    let mut rows = Vec::new();
    for c in setup.enumerate_critical()? {
        let count = census.counts.get(&c.label).copied().unwrap_or(0);
        rows.push((c.label.to_string(), c.index, count));
    }
    let body = match o.space.format {
        Format::Text => {
            let mut s = format!("{} ascending flows, {} failures\n", o.samples, census.failures);
            for (l, i, c) in &rows {
                s += &format!("{l:<14} index {i:>3}  {c}\n");
            }
            s
        }
        _ => {
            let mut obj = header(&setup);
            obj.insert("seed".into(), json!(o.seed));
            obj.insert("samples".into(), json!(o.samples));
            obj.insert("failures".into(), json!(census.failures));
            let list: Vec<Value> = rows
                .iter()
                .map(|(l, i, c)| json!({"label": l, "index": i, "count": c}))
                .collect();
            obj.insert("counts".into(), Value::Array(list));
            compact(&Value::Object(obj))
        }
    };
    Ok(Report {
        body,
        failed: census.failures > 0,
    })
}

fn parse_vectors(s: &str) -> Result<Vec<Vec<f64>>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_list("vectors", t))
        .collect()
}

fn resolve_point(o: &ResolveOpts) -> Result<ManifoldPoint> {
    let n = o.n;
    match (&o.label, &o.vectors) {
        (Some(l), None) => {
            let set = match parse_label(l)? {
                Label::Subset(s) => s,
                Label::Perm(_) => return Err(CliError::Usage("--I takes a subset".into())),
            };
            if set.iter().any(|&i| i > n) {
                return Err(CliError::Usage(format!("--I must be a subset of 1..{n}")));
            }
            match o.space {
                Space::So => {
                    let n_prime = 2 * (n / 2);
                    if set.len() % 2 == 1 || set.len() > n_prime {
                        return Err(CliError::Usage("SO(n) labels have even size".into()));
                    }
                    let mut lines = vec![Line::coordinate(n, 1, Field::Real); n_prime - set.len()];
                    lines.extend(set.iter().map(|&i| Line::coordinate(n, i, Field::Real)));
                    Ok(resolve_so(&lines, n)?)
                }
                Space::Grass => {
                    let lines: Vec<Line> = set.iter().map(|&i| Line::coordinate(n, i, Field::Complex)).collect();
                    Ok(resolve_grass(&lines, n)?)
                }
                Space::Cs => {
                    let planes = (1..=n)
                        .map(|s| {
                            let mut u = vec![0.0; 2 * n];
                            let mut v = vec![0.0; 2 * n];
                            u[2 * s - 2] = 1.0;
                            v[2 * s - 1] = 1.0;
                            let p = OrientedPlane::new(u, v)?;
                            Ok(if set.contains(&s) { p.reversed() } else { p })
                        })
                        .collect::<morsekit::Result<Vec<_>>>()?;
                    Ok(resolve_cs(&planes)?)
                }
            }
        }
        (None, Some(v)) => match o.space {
            Space::So | Space::Grass => {
                let field = if o.space == Space::So { Field::Real } else { Field::Complex };
                let lines = parse_vectors(v)?
                    .into_iter()
                    .map(|c| Line::new(c.into_iter().map(morsekit::Scalar::real).collect(), field))
                    .collect::<morsekit::Result<Vec<_>>>()?;
                if o.space == Space::So {
                    Ok(resolve_so(&lines, n)?)
                } else {
                    Ok(resolve_grass(&lines, n)?)
                }
            }
            Space::Cs => {
                let planes = v
                    .split(';')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        let (a, b) = t
                            .split_once('|')
                            .ok_or_else(|| CliError::Usage(format!("plane {t:?} is not of the form u|v")))?;
                        Ok(OrientedPlane::spanned_by(&parse_list("vectors", a)?, &parse_list("vectors", b)?)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if planes.len() != n {
                    return Err(CliError::Usage(format!("CS({n}) is resolved by {n} planes, got {}", planes.len())));
                }
                Ok(resolve_cs(&planes)?)
            }
        },
        _ => Err(CliError::Usage("resolve needs exactly one of --I or --vectors".into())),
    }
}

fn resolve(o: &ResolveOpts) -> Result<Report> {
    no_csv(o.format, "resolve")?;
    let p = resolve_point(o)?;
    let setup = MorseSetup::new(p.manifold().clone())?;
    let (nearest, distance) = Classifier::new(&setup)?.nearest(p.matrix());
    let critical = distance < 1e-9;
    let f = setup.f_value(&p)?;
    let body = match o.format {
        Format::Text => {
            let mut s = format!("point of {} (residual {:e}), f = {f}\n{}\n", p.manifold(), p.residual(), p.matrix());
            if critical {
                s += &format!("critical point {nearest}\n");
            } else {
                s += &format!("nearest critical point {nearest} at distance {distance}\n");
            }
            s
        }
        _ => {
            let mut obj = header(&setup);
            obj.insert("matrix".into(), render::matrix(p.matrix()));
            obj.insert("residual".into(), json!(p.residual()));
            obj.insert("f".into(), json!(f));
            obj.insert("nearest_label".into(), json!(nearest.to_string()));
            obj.insert("distance".into(), json!(distance));
            obj.insert("is_critical".into(), json!(critical));
            compact(&Value::Object(obj))
        }
    };
    Ok(ok(body))
}

fn bs_check(o: &BsCheckOpts) -> Result<Report> {
    let setup = MorseSetup::new(space_manifold(o.space, o.n, o.k)?)?;
    let labels: Vec<Label> = match &o.label {
        Some(l) => vec![parse_label(l)?],
        None => setup.enumerate_critical()?.into_iter().map(|c| c.label).collect(),
    };
    let mut rows = Vec::new();
    let mut all_hold = true;
    for label in labels {
        let index = setup.index_closed(&label)?;
        let rep = bs_max_check(&setup, &label, o.samples, o.seed)?;
        all_hold &= rep.holds;
        rows.push((label.to_string(), index, rep));
    }
    let body = match o.format {
        Format::Json => {
            let mut obj = header(&setup);
            obj.insert("seed".into(), json!(o.seed));
            obj.insert("samples".into(), json!(o.samples));
            obj.insert("all_hold".into(), json!(all_hold));
            let list: Vec<Value> = rows
                .iter()
                .map(|(l, i, r)| {
                    json!({
                        "label": l,
                        "index": i,
                        "f_sigma": r.f_sigma,
                        "max_f": r.max_f,
                        "near_max_fraction": r.near_max_fraction,
                        "holds": r.holds,
                    })
                })
                .collect();
            obj.insert("labels".into(), Value::Array(list));
            compact(&Value::Object(obj))
        }
        Format::Csv => {
            let mut s = csv_row(&["label", "index", "f_sigma", "max_f", "near_max_fraction", "holds"]);
            for (l, i, r) in &rows {
                s += &csv_row(&[
                    csv_label(l),
                    i.to_string(),
                    format_number(r.f_sigma),
                    format_number(r.max_f),
                    format_number(r.near_max_fraction),
                    r.holds.to_string(),
                ]);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (l, i, r) in &rows {
                s += &format!(
                    "{l:<14} index {i:>3}  f(sigma) {}  max {}  near-max {}  {}\n",
                    r.f_sigma,
                    r.max_f,
                    r.near_max_fraction,
                    if r.holds { "ok" } else { "EXCEEDED" }
                );
            }
            s
        }
    };
    Ok(Report {
        body,
        failed: !all_hold,
    })
}

fn ring_for(space: Space, n: usize, k: Option<usize>) -> Result<RingSpec> {
    let spec = match space {
        Space::Grass => {
            let k = k.ok_or_else(|| CliError::Usage("the Grassmannian needs --k".into()))?;
            RingSpec::GrassQuotient { n, k }
        }
        Space::So => {
            if k.is_some() {
                return Err(CliError::Usage("--k applies only to the Grassmannian".into()));
            }
            RingSpec::TruncatedZ2 { n, vars: 2 * (n / 2) }
        }
        Space::Cs => {
            if k.is_some() {
                return Err(CliError::Usage("--k applies only to the Grassmannian".into()));
            }
            RingSpec::SchurPRing { n }
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn product(o: &ProductOpts) -> Result<Report> {
    let spec = ring_for(o.space, o.n, o.k)?;
    let lambda = Partition::parse(&o.i)?;
    let mu = Partition::parse(&o.j)?;
    let c = structure_constants(&spec, &lambda, &mu)?;
    let body = match o.format {
        Format::Json => compact(&render::constants(&c)),
        Format::Csv => {
            let mut s = csv_row(&["partition", "coefficient"]);
            for (k, v) in &c {
                s += &csv_row(&[csv_label(&k.to_string()), v.to_string()]);
            }
            s
        }
        Format::Text => format!("s{lambda} * s{mu} = {} in {spec}\n", render::constants_text(&c)),
    };
    Ok(ok(body))
}

fn poincare_consistency(o: &ConsistencyOpts) -> Result<Report> {
    no_csv(o.format, "poincare-consistency")?;
    let (n, k) = (o.n, o.k);
    let setup = MorseSetup::new(Manifold::grass(n, k)?)?;
    let p = setup.poincare(Ring::Z)?;
    let spec = RingSpec::GrassQuotient { n, k };
    let mut degrees = Vec::new();
    let mut consistent = true;
    for d in 0..=k * (n - k) {
        let count = partitions(d, k, n - k).len() as u64;
        let b = p.coefficient(2 * d);
        consistent &= count == b && p.coefficient(2 * d + 1) == 0;
        degrees.push((d, count, b));
    }
    let mut relations = BTreeMap::new();
    for (i, rel) in grass_relations(n, k).iter().enumerate() {
        let zero = reduce(rel, &spec)?.is_zero();
        consistent &= zero;
        relations.insert(i + 1, zero);
    }
    let body = match o.format {
        Format::Text => {
            let mut s = String::new();
            for (d, c, b) in &degrees {
                s += &format!("degree {d:>2}: {c} partitions, b_{} = {b}\n", 2 * d);
            }
            for (i, z) in &relations {
                s += &format!("p_{i} reduces to {}\n", if *z { "0" } else { "a nonzero class" });
            }
            s += if consistent { "consistent\n" } else { "INCONSISTENT\n" };
            s
        }
        _ => {
            let mut obj = header(&setup);
            obj.insert("consistent".into(), json!(consistent));
            let list: Vec<Value> = degrees
                .iter()
                .map(|(d, c, b)| json!({"degree": d, "partitions": c, "betti": b}))
                .collect();
            obj.insert("degrees".into(), Value::Array(list));
            let rels: Vec<Value> = relations
                .iter()
                .map(|(i, z)| json!({"relation": i, "reduces_to_zero": z}))
                .collect();
            obj.insert("relations".into(), Value::Array(rels));
            compact(&Value::Object(obj))
        }
    };
    Ok(Report {
        body,
        failed: !consistent,
    })
}
