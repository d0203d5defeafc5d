//! One trial per suite, fully determined by the campaign and a trial seed.

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;
use symnet_core::extraction::{decompose_one_row, long_parameter_is_row_length};
use symnet_core::formats::WordEntryDto;
use symnet_core::localization::{jacobson_corollary_check, patch_report, project_matrix};
use symnet_core::subgroups::{product_length_identity_check, word_rng, GeneratorSet};
use symnet_core::transporter::{is_in_transporter, normalization_witness, sandwich_check, NetMutation};
use symnet_core::{
    membership_defect, row_length, steinberg_check, word_product, FormNet, Relation, TransvectionSpec,
};

use crate::{Campaign, CliError, Counterexample, SuiteName};

pub(crate) enum Trial {
    Pass,
    /// passes, with a remark folded into the suite notes
    PassWithNote(&'static str),
    Fail(Counterexample),
}

fn entries(specs: &[TransvectionSpec]) -> Vec<WordEntryDto> {
    specs.iter().map(WordEntryDto::from).collect()
}

fn fail(seed: u64, word: &[TransvectionSpec], detail: serde_json::Value) -> Trial {
    Trial::Fail(Counterexample { seed, word: entries(word), detail })
}

fn core_err(suite: SuiteName) -> impl Fn(symnet_core::Error) -> CliError {
    move |source| CliError::Suite { suite: suite.name(), source }
}

pub(crate) fn run_trial(suite: SuiteName, c: &Campaign, seed: u64) -> Result<Trial, CliError> {
    let err = core_err(suite);
    let (r, s) = (c.ring, c.index_set);
    Ok(match suite {
        SuiteName::Steinberg => {
            let rel = Relation::random(&mut word_rng(seed), s, r);
            if steinberg_check(&rel, r, s).map_err(&err)? {
                Trial::Pass
            } else {
                fail(seed, &[], json!({ "relation": format!("{rel:?}") }))
            }
        }
        SuiteName::LengthIdentity => {
            let full = GeneratorSet::from_net(&FormNet::full(r, s));
            let (wa, a) = full.sample_bounded_word(c.max_word_length, seed);
            let (wb, b) = full.sample_bounded_word(c.max_word_length, !seed);
            for i in s.indices() {
                if !product_length_identity_check(&a, &b, i).map_err(&err)? {
                    let word: Vec<_> = wa.specs.iter().chain(&wb.specs).copied().collect();
                    return Ok(fail(seed, &word, json!({ "split": wa.specs.len(), "i": i })));
                }
            }
            Trial::Pass
        }
        SuiteName::GroupClosure => {
            let net = &c.net;
            let (word, g) = GeneratorSet::from_net(net).sample_bounded_word(c.max_word_length, seed);
            match membership_defect(&g, net).or_else(|| membership_defect(&g.inverse(), net)) {
                None => Trial::Pass,
                Some(d) => fail(seed, &word.specs, json!({ "defect": d })),
            }
        }
        SuiteName::Transporter => {
            let net = &c.net;
            let (word, g) = GeneratorSet::from_net(net).sample_bounded_word(c.max_word_length, seed);
            let (ok, report) = is_in_transporter(&g, net).map_err(&err)?;
            if !ok {
                return Ok(fail(seed, &word.specs, json!({ "violation": report.first_violation() })));
            }
            match normalization_witness(&g, net, 20, seed, c.max_word_length).map_err(&err)? {
                None => Trial::Pass,
                Some(w) => fail(seed, &word.specs, json!({ "conjugated": w })),
            }
        }
        SuiteName::Sandwich => {
            let mutation = if c.mutate { NetMutation::default_for(&c.nu, &c.net) } else { None };
            let report = sandwich_check(&c.nu, &c.extra, r, 1, seed, c.max_word_length, mutation).map_err(&err)?;
            match report.failure {
                None => Trial::Pass,
                Some(f) => {
                    let word = f.word().specs.clone();
                    fail(seed, &word, json!({ "failure": f, "mutation": report.mutation }))
                }
            }
        }
        SuiteName::Extraction => {
            let mut rng = word_rng(seed);
            let idx: Vec<i32> = s.indices().collect();
            let p = idx[rng.random_range(0..idx.len())];
            let mut specs = Vec::new();
            for j in s.positives().filter(|&j| j != p.abs()) {
                for q in [j, -j] {
                    let x = r.elem(rng.random_range(0..r.modulus()) as i64);
                    specs.push(TransvectionSpec::short(-p, q, x).map_err(&err)?);
                }
            }
            let x = r.elem(rng.random_range(0..r.modulus()) as i64);
            specs.push(TransvectionSpec::long(-p, x).map_err(&err)?);
            specs.shuffle(&mut rng);
            let a = word_product(&specs, r, s).map_err(&err)?;
            let d = decompose_one_row(&a, p).map_err(&err)?;
            if word_product(&d, r, s).map_err(&err)? != a {
                fail(seed, &specs, json!({ "p": p, "decomposition": entries(&d) }))
            } else if !long_parameter_is_row_length(&a, p) {
                Trial::PassWithNote("trailing long parameter differs from row_length(a, -p)")
            } else {
                Trial::Pass
            }
        }
        SuiteName::Jacobson => {
            let report = jacobson_corollary_check(&c.nu, &c.extra, r, 1, seed, c.max_word_length).map_err(&err)?;
            match report.failure {
                None => Trial::Pass,
                Some(w) => {
                    let word = w.word.specs.clone();
                    fail(seed, &word, json!({ "defect": w.defect }))
                }
            }
        }
        SuiteName::Crt => {
            let net = &c.net;
            let full = GeneratorSet::from_net(&FormNet::full(r, s));
            let (word, b) = if seed % 2 == 0 {
                GeneratorSet::from_net(net).sample_bounded_word(c.max_word_length, seed)
            } else {
                full.sample_bounded_word(3, seed)
            };
            let report = patch_report(&b, net).map_err(&err)?;
            if !report.agrees() {
                return Ok(fail(seed, &word.specs, json!({ "report": report })));
            }
            let (_, other) = full.sample_bounded_word(6, !seed);
            for f in r.crt_split().rings() {
                let pb = project_matrix(&b, f).map_err(&err)?;
                let lhs = project_matrix(&b.multiply(&other).map_err(&err)?, f).map_err(&err)?;
                let rhs = pb.multiply(&project_matrix(&other, f).map_err(&err)?).map_err(&err)?;
                let lengths = s.indices().all(|i| row_length(&b, i).value() % f.modulus() == row_length(&pb, i).value());
                if lhs != rhs || !lengths {
                    return Ok(fail(seed, &word.specs, json!({ "factor": f.modulus(), "projection": "not compatible" })));
                }
            }
            Trial::Pass
        }
    })
}
