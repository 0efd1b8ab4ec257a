//! Markdown rendering of a certificate, one table per reduction stage.

use std::fmt::Write;

use padovan_core::heights::BoundChainRecord;
use padovan_core::reduction::{EpsilonRecord, ReductionCertificate, StageCase, StageReport};
use padovan_core::search::RepresentationSet;

use crate::certificate::{Certificate, RunStatus};

pub fn render_markdown(cert: &Certificate) -> String {
    let mut out = String::new();
    let c = &cert.config;
    let _ = writeln!(out, "# Repdigits as sums of three Padovan numbers\n");
    let _ = writeln!(out, "| setting | value |\n|---|---|");
    let _ = writeln!(out, "| command | {} |", cert.meta.command);
    let _ = writeln!(out, "| tool version | {} |", cert.meta.tool_version);
    let _ = writeln!(out, "| precision (digits) | {} |", c.precision_digits);
    let _ = writeln!(out, "| n_max | {} |", c.n_max);
    let _ = writeln!(out, "| l_max | {} |", c.l_max);
    if let Some(m) = &c.m_override {
        let _ = writeln!(out, "| modulus override | {m} |");
    }
    let status = match cert.meta.status {
        RunStatus::Complete => "complete",
        RunStatus::Partial => "partial",
    };
    let _ = writeln!(out, "| status | {status} |");
    if let Some(closed) = cert.meta.closed {
        let _ = writeln!(out, "| proof closed | {closed} |");
    }
    if let Some(f) = &cert.meta.failure {
        let _ = writeln!(out, "\n**Failure:** {f}");
    }
    for note in &cert.meta.notes {
        let _ = writeln!(out, "\n> {note}");
    }
    if let Some(s) = &cert.solutions {
        search_section(&mut out, s);
    }
    if let Some(b) = &cert.bounds {
        bounds_section(&mut out, b);
    }
    if let Some(r) = &cert.reduction {
        reduction_section(&mut out, r);
    }
    out
}

fn search_section(out: &mut String, s: &RepresentationSet) {
    let _ = writeln!(out, "\n## Search\n");
    let _ = writeln!(out, "Indices up to {}, lengths up to {}.\n", s.n_max(), s.l_max());
    if s.is_empty() {
        let _ = writeln!(out, "No solutions.");
        return;
    }
    let _ = writeln!(
        out,
        "| value | digit | length | representations (n1, n2, n3) |\n|---:|---:|---:|---|"
    );
    for v in s.values() {
        let reps = s.representations(&v);
        let listed: Vec<String> = reps.iter().map(|r| format!("({}, {}, {})", r.n1, r.n2, r.n3)).collect();
        let _ = writeln!(
            out,
            "| {v} | {} | {} | {} |",
            reps[0].digit,
            reps[0].length,
            listed.join(" ")
        );
    }
    let _ = writeln!(
        out,
        "\n{} values, {} representations.",
        s.values().len(),
        s.len_solutions()
    );
}

fn bounds_section(out: &mut String, b: &BoundChainRecord) {
    let _ = writeln!(out, "\n## Linear-form bounds\n");
    let _ = writeln!(out, "| quantity | value |\n|---|---|");
    let _ = writeln!(out, "| n1 - n2 < c1 log n1 | c1 = {} |", b.c1);
    let _ = writeln!(out, "| n2 - n3 < c2 (log n1)^2 | c2 = {} |", b.c2);
    let _ = writeln!(out, "| n1 < c3 (log n1)^3 | c3 = {} |", b.c3);
    let _ = writeln!(out, "| constant inverted | {} |", b.c3_used);
    let _ = writeln!(out, "| absolute bound on n1 | {} |", b.absolute_bound);
}

fn case_label(c: &StageCase) -> String {
    match (c.k, c.s) {
        (None, _) => format!("d={}", c.d),
        (Some(k), None) => format!("d={}, k={k}", c.d),
        (Some(k), Some(s)) => format!("d={}, k={k}, s={s}", c.d),
    }
}

fn epsilon_cell(e: &Option<EpsilonRecord>) -> String {
    match e {
        Some(e) => format!("{} at {} (q index {})", e.epsilon, case_label(&e.case), e.q_index),
        None => "n/a".into(),
    }
}

fn stage_table(out: &mut String, title: &str, s: &StageReport) {
    let _ = writeln!(out, "\n### {title}\n");
    let _ = writeln!(out, "| field | value |\n|---|---|");
    let _ = writeln!(out, "| A | {} |", s.a_coeff);
    let _ = writeln!(out, "| cases | {} |", s.cases);
    let _ = writeln!(
        out,
        "| min epsilon, first convergent | {} |",
        epsilon_cell(&s.min_epsilon_primary)
    );
    let _ = writeln!(
        out,
        "| min epsilon, convergent used | {} |",
        epsilon_cell(&s.min_epsilon_used)
    );
    let _ = writeln!(
        out,
        "| main bound | {} at {} |",
        s.main_bound,
        case_label(&s.main_argmax)
    );
    let _ = writeln!(out, "| combined bound | {} |", s.combined_bound);
    let _ = writeln!(out, "| reported bound | {} |", s.reported_bound());
    let settled: Vec<String> = s.settled_at.iter().map(|(i, n)| format!("{i}: {n}")).collect();
    let _ = writeln!(out, "| cases settled per convergent | {} |", settled.join(", "));
    if !s.exceptions.is_empty() {
        let _ = writeln!(
            out,
            "\n| exception | mu | epsilon | threshold | Legendre | bound |\n|---|---:|---|---:|---:|---:|"
        );
        for e in &s.exceptions {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                case_label(&e.case),
                e.mu_integer,
                e.epsilon,
                e.resolution.convergent_threshold,
                e.resolution.legendre_bound,
                e.resolution.bound
            );
        }
    }
}

fn reduction_section(out: &mut String, r: &ReductionCertificate) {
    let _ = writeln!(out, "\n## Reduction\n");
    let _ = writeln!(
        out,
        "M = {}, working precision {} digits.\n",
        r.modulus, r.precision_digits
    );
    let _ = writeln!(out, "Convergent {} of log 10 / log alpha:\n", r.convergent.index);
    let _ = writeln!(
        out,
        "- p = {}\n- q = {}\n- a(M) = {}",
        r.convergent.p, r.convergent.q, r.max_quotient
    );
    stage_table(out, "Gap n1 - n2", &r.stage1);
    stage_table(out, "Gap n2 - n3", &r.stage2);
    stage_table(out, "Largest exponent", &r.stage3);
    let _ = writeln!(out, "\n### Conclusion\n");
    let _ = writeln!(
        out,
        "Bounds {} / {} / {} give n1 <= {}; assumed n1 > {}; contradiction: {}.",
        r.stage1_bound, r.stage2_bound, r.stage3_bound, r.largest_index_bound, r.search_threshold, r.contradiction
    );
}
