use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use serde_json::{json, Value};
use twistbench_core::io::{
    export_algebra, export_con_lattice, export_twist, parse_formula, render_spec,
    spec_from_algebra, to_canonical_string, Kind,
};
use twistbench_core::search::all_counterexamples;
use twistbench_core::{
    alpha, beta, build_twist, center_algebra, check_con_iso, check_suite, enumerate_congruences,
    enumerate_congruences_brute, enumerate_quantifier_pairs, monadic_godel_corpus, probe_clause,
    Algebra, CheckOptions, CheckReport, Elem, Homomorphism, Op, TwistError,
};

use crate::input::{is_alg, load};
use crate::outcome::Outcome;
use crate::{
    BuildArgs, CheckArgs, CongruenceArgs, CorpusArgs, CounterexampleArgs, ExportArgs, FileArgs,
    Format, QuantifierArgs, Target,
};

pub fn check(args: CheckArgs) -> Result<Outcome> {
    let l = load(&args.input)?;
    let a = &l.algebra;
    let opts = CheckOptions {
        report_all: args.all_witnesses,
        include_opt_in: args.opt_in,
    };
    let mut report = check_suite(a, args.suite, opts)?;
    for p in &args.probes {
        let (clause, assignment) = parse_probe(a, p)?;
        let probe = probe_clause(a, args.suite, clause, &assignment, Some(&report))?;
        report.probes.push(probe);
    }
    if let Some(k) = &l.kind_failure {
        report.notes.push(format!(
            "declared kind `{}` fails its suite at {}",
            l.kind,
            k.clause.as_deref().unwrap_or("?")
        ));
    }
    Ok(Outcome::report(&report))
}

/// `CLAUSE:VAR=LABEL;VAR=LABEL`
fn parse_probe<'a>(a: &Algebra, text: &'a str) -> Result<(&'a str, Vec<(String, Elem)>)> {
    let (clause, rest) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("probe `{text}` is not of the form CLAUSE:VAR=LABEL;..."))?;
    let mut assignment = Vec::new();
    for part in rest.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (var, label) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("probe binding `{part}` is not VAR=LABEL"))?;
        let e = a
            .index_of(label.trim())
            .ok_or_else(|| anyhow!("probe names unknown element label `{}`", label.trim()))?;
        assignment.push((var.trim().to_string(), e));
    }
    Ok((clause.trim(), assignment))
}

/// The most specific kind whose suite `a` passes.
fn best_kind(a: &Algebra) -> Kind {
    [
        Kind::MonadicNelson,
        Kind::Nelson,
        Kind::MonadicGodel,
        Kind::Godel,
        Kind::MonadicHeyting,
        Kind::Heyting,
    ]
    .into_iter()
    .find(|k| {
        k.suite()
            .and_then(|id| check_suite(a, id, CheckOptions::default()).ok())
            .is_some_and(|r| r.passed())
    })
    .unwrap_or(Kind::Raw)
}

fn write_output(path: &Path, name: &str, a: &Algebra, json: &Value) -> Result<()> {
    let text = if is_alg(path) {
        render_spec(&spec_from_algebra(name, best_kind(a), a))
    } else {
        to_canonical_string(json)
    };
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn built(name: String, a: &Algebra, json: Value, header: String, output: Option<&Path>) -> Result<Outcome> {
    let mut text = header;
    if let Some(path) = output {
        write_output(path, &name, a, &json)?;
        text.push_str(&format!("\nwritten to {}", path.display()));
    }
    Ok(Outcome::new(true, json, text))
}

pub fn twist(args: BuildArgs) -> Result<Outcome> {
    let l = load(&args.input)?;
    let tw = build_twist(&l.algebra)?;
    let labels: Vec<&str> = tw.result.names().iter().map(String::as_str).collect();
    let header = format!(
        "K({}): {} pairs, kind {}\n  {}",
        l.name,
        tw.size(),
        best_kind(&tw.result),
        labels.join(" ")
    );
    built(
        format!("K({})", l.name),
        &tw.result,
        export_twist(&tw),
        header,
        args.output.as_deref(),
    )
}

pub fn center(args: BuildArgs) -> Result<Outcome> {
    let l = load(&args.input)?;
    let c = center_algebra(&l.algebra)?;
    let a = &c.algebra;
    let header = format!(
        "C({}): {} elements, kind {}\n  {}",
        l.name,
        a.size(),
        best_kind(a),
        a.names().join(" ")
    );
    built(format!("C({})", l.name), a, export_algebra(a), header, args.output.as_deref())
}

fn map_json(h: &Homomorphism) -> Value {
    let pairs: Vec<[&str; 2]> = (0..h.source.size())
        .map(|x| [h.source.label(x), h.target.label(h.apply(x))])
        .collect();
    json!({ "map": pairs, "verdict": "pass" })
}

fn map_text(name: &str, what: &str, h: &Homomorphism) -> String {
    let rows: Vec<String> = (0..h.source.size())
        .map(|x| format!("{} ↦ {}", h.source.label(x), h.target.label(h.apply(x))))
        .collect();
    format!("{name}: {what} verified\n  {}", rows.join(", "))
}

pub fn equiv(args: FileArgs) -> Result<Outcome> {
    let l = load(&args)?;
    let a = &l.algebra;
    let nelson = a.has_op(Op::Nimp) && a.has_op(Op::Neg);
    let run = || -> Result<(Homomorphism, Homomorphism), TwistError> {
        if nelson {
            let b = beta(a)?;
            let c = center_algebra(a)?;
            Ok((alpha(&c.algebra)?, b))
        } else {
            let al = alpha(a)?;
            let tw = build_twist(a)?;
            Ok((al, beta(&tw.result)?))
        }
    };
    match run() {
        Ok((al, be)) => {
            let (what_a, what_b) = if nelson {
                ("C(T) ≅ C(K(C(T)))", "T ≅ K(C(T))")
            } else {
                ("A ≅ C(K(A))", "K(A) ≅ K(C(K(A)))")
            };
            let text = format!(
                "{}\n{}",
                map_text("alpha", what_a, &al),
                map_text("beta", what_b, &be)
            );
            Ok(Outcome::new(
                true,
                json!({ "alpha": map_json(&al), "beta": map_json(&be) }),
                text,
            ))
        }
        Err(TwistError::Verification(r)) => Ok(Outcome::report(&r)),
        Err(e) => Err(e.into()),
    }
}

pub fn congruences(args: CongruenceArgs) -> Result<Outcome> {
    let l = load(&args.input)?;
    let a = &l.algebra;
    let cl = enumerate_congruences(a);
    let mut json = export_con_lattice(a, &cl);
    let mut text = format!("{} congruences", cl.len());
    for c in &cl.congruences {
        text.push_str(&format!("\n  {}", c.describe(a)));
    }
    let mut ok = true;
    if args.oracle {
        let brute = enumerate_congruences_brute(a)?;
        ok = brute.congruences == cl.congruences;
        json["oracle"] = json!({ "agrees": ok, "count": brute.len() });
        text.push_str(&format!(
            "\noracle: {} ({} congruences by partition filtering)",
            if ok { "agrees" } else { "DISAGREES" },
            brute.len()
        ));
    }
    Ok(Outcome::new(ok, json, text))
}

pub fn con_iso(args: FileArgs) -> Result<Outcome> {
    let l = load(&args)?;
    Ok(Outcome::report(&check_con_iso(&l.algebra)?))
}

fn table_row(a: &Algebra, t: &[Elem]) -> Vec<String> {
    t.iter().map(|&e| a.label(e).to_string()).collect()
}

pub fn quantifiers(args: QuantifierArgs) -> Result<Outcome> {
    let l = load(&args.input)?;
    let a = &l.algebra;
    let pairs = enumerate_quantifier_pairs(a, args.mode, args.filter, args.max_size)?;
    let mut text = format!(
        "{} quantifier pairs ({} mode, filter {})",
        pairs.len(),
        args.mode,
        args.filter
    );
    let mut docs = Vec::new();
    for (k, q) in pairs.iter().enumerate() {
        let entries = |t: &[Elem]| {
            (0..a.size())
                .map(|x| format!("{}->{}", a.label(x), a.label(t[x])))
                .collect::<Vec<_>>()
                .join(", ")
        };
        text.push_str(&format!(
            "\nq{}\n  op exists: {}\n  op forall: {}",
            k + 1,
            entries(&q.exists),
            entries(&q.forall)
        ));
        docs.push(json!({
            "exists": table_row(a, &q.exists),
            "forall": table_row(a, &q.forall),
        }));
    }
    let json = json!({
        "elements": a.names(),
        "filter": args.filter.as_str(),
        "mode": args.mode.to_string(),
        "pairs": docs,
    });
    Ok(Outcome::new(true, json, text))
}

pub fn counterexample(args: CounterexampleArgs) -> Result<Outcome> {
    let l = load(&args.input)?;
    let f = parse_formula(&args.formula).map_err(|e| anyhow!("formula {e}"))?;
    let all = all_counterexamples(&l.algebra, &f)?;
    let mut r = match all.first() {
        None => CheckReport::pass(),
        Some(w) => CheckReport::fail(w.clone()),
    };
    r.all_witnesses = all;
    Ok(Outcome::report(&r.with_subject("counterexample search")))
}

pub fn corpus(args: CorpusArgs) -> Result<Outcome> {
    let entries = monadic_godel_corpus(args.max_size)?;
    let mut failures = 0;
    let mut docs = Vec::new();
    let mut lines = Vec::new();
    for e in &entries {
        let tw;
        let target = match args.on {
            Target::Base => &e.algebra,
            Target::Twist => {
                tw = build_twist(&e.algebra)?;
                &tw.result
            }
        };
        let r = check_suite(target, args.suite, CheckOptions::default())?;
        if r.failed() {
            failures += 1;
        }
        let mut line = format!("{:<10} {:>2} elements  {}", e.name, target.size(), if r.passed() { "PASS" } else { "FAIL" });
        if let Some(c) = &r.clause {
            line.push_str(&format!(" at {c}"));
        }
        lines.push(line);
        docs.push(json!({
            "name": e.name,
            "report": serde_json::to_value(&r)?,
            "size": target.size(),
        }));
    }
    lines.push(format!(
        "{} algebras, {} failures of {} on the {}",
        entries.len(),
        failures,
        args.suite,
        match args.on {
            Target::Base => "algebras",
            Target::Twist => "twists",
        }
    ));
    let json = json!({
        "entries": docs,
        "failures": failures,
        "max_size": args.max_size,
        "suite": args.suite.as_str(),
    });
    Ok(Outcome::new(failures == 0, json, lines.join("\n")))
}

pub fn export(args: ExportArgs) -> Result<Outcome> {
    let l = load(&args.input)?;
    let a = &l.algebra;
    let json = export_algebra(a);
    let text = match args.format {
        Format::Json => to_canonical_string(&json),
        Format::Alg => render_spec(&spec_from_algebra(&l.name, l.kind, a)),
    };
    if let Some(path) = &args.output {
        fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let json = match args.format {
        Format::Json => json,
        Format::Alg => Value::String(text.clone()),
    };
    Ok(Outcome::new(true, json, text))
}
