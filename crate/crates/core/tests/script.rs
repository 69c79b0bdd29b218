use std::collections::BTreeMap;

use glyphometrics::fixtures::{self, synthetic_script, synthetic_stages, WriterStyle};
use glyphometrics::geometry::{Point, SplineSegment};
use glyphometrics::metrics::{compute_all, DistinctivityMode, MetricOptions, MetricRecord};
use glyphometrics::script::*;
use glyphometrics::segment::{segment, SegmentationConfig, SegmentationResult};
use glyphometrics::{DirectionCode, Glyph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use DirectionCode::*;

fn seg_all(doc: &glyphometrics::io::CorpusDocument) -> Vec<(Glyph, SegmentationResult)> {
    doc.corpus
        .glyphs
        .iter()
        .map(|g| {
            let t = &doc.trajectories[&g.id];
            (g.clone(), segment(g, t, &SegmentationConfig::default()).unwrap())
        })
        .collect()
}

fn records(doc: &glyphometrics::io::CorpusDocument) -> Vec<MetricRecord> {
    seg_all(doc)
        .iter()
        .map(|(g, s)| compute_all(g, &doc.trajectories[&g.id], s, &MetricOptions::default()).unwrap())
        .collect()
}

fn line_glyph(id: &str, len: f64) -> Glyph {
    Glyph::new(id, "s", vec![SplineSegment::line(Point::new(0.0, len), Point::ORIGIN)])
}

fn with_length(id: &str, len: f64) -> MetricRecord {
    let (g, t) = fixtures::straight();
    let s = segment(&g, &t, &SegmentationConfig::default()).unwrap();
    let mut r = compute_all(&g, &t, &s, &MetricOptions::default()).unwrap();
    r.glyph_id = id.into();
    r.length = len;
    r
}

#[test]
fn aggregate_means_and_weights() {
    let glyphs = vec![line_glyph("a", 2.0).with_frequency(1.0), line_glyph("b", 4.0).with_frequency(3.0)];
    let recs = vec![with_length("a", 2.0), with_length("b", 4.0)];
    let m = aggregate("s", &glyphs, &recs, Weighting::Frequency, Binning::default()).unwrap();
    assert_eq!(m.means["length"], Some(3.0));
    assert_eq!(m.weighted_means.as_ref().unwrap()["length"], Some(3.5));
    assert_eq!(m.per_glyph.len(), 2);
    let u = aggregate("s", &glyphs, &recs, Weighting::Uniform, Binning::default()).unwrap();
    assert!(u.weighted_means.is_none());

    let one = aggregate("s", &glyphs[..1], &recs[..1], Weighting::Uniform, Binning::default()).unwrap();
    for (name, v) in recs[0].scalars() {
        assert_eq!(one.means[name], v, "{name}");
    }
    assert!(aggregate("s", &[], &[], Weighting::Uniform, Binning::default()).is_err());
}

#[test]
fn equal_frequencies_match_uniform_weighting() {
    let doc = synthetic_script("eq", &WriterStyle::mixed(), 12, 3);
    let glyphs: Vec<Glyph> = doc.corpus.glyphs.iter().map(|g| g.clone().with_frequency(2.5)).collect();
    let recs = records(&doc);
    let m = aggregate("eq", &glyphs, &recs, Weighting::Frequency, Binning::default()).unwrap();
    for (k, v) in &m.means {
        let w = m.weighted_means.as_ref().unwrap()[k];
        match (v, w) {
            (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{k}"),
            _ => assert_eq!(v.is_some(), w.is_some()),
        }
    }
}

#[test]
fn undefined_values_are_left_out_of_means() {
    let doc = fixtures::fixture_document();
    let recs = records(&doc);
    let m = aggregate("fx", &doc.corpus.glyphs, &recs, Weighting::Uniform, Binning::default()).unwrap();
    let defined: Vec<f64> = recs.iter().filter_map(|r| r.scalar("lb_index")).collect();
    assert!(defined.len() < recs.len());
    let mean = defined.iter().sum::<f64>() / defined.len() as f64;
    assert!((m.means["lb_index"].unwrap() - mean).abs() < 1e-12);
}

#[test]
fn histograms_record_edges_and_counts() {
    let h = histogram(&[1.0, 2.0, 2.0, 3.0, 10.0], Binning::Fixed(3)).unwrap();
    assert_eq!(h.edges.len(), 4);
    assert_eq!(h.counts.iter().sum::<usize>(), 5);
    assert_eq!(h.edges[0], 1.0);
    assert_eq!(h.edges[3], 10.0);
    let fd = histogram(&(0..100).map(f64::from).collect::<Vec<_>>(), Binning::FreedmanDiaconis).unwrap();
    assert!(fd.counts.len() >= MIN_FD_BINS);
    assert_eq!(fd.counts.iter().sum::<usize>(), 100);
    let flat = histogram(&[2.0, 2.0], Binning::FreedmanDiaconis).unwrap();
    assert_eq!(flat.counts.len(), MIN_FD_BINS);
    assert!(histogram(&[], Binning::default()).is_none());
}

#[test]
fn bigram_hand_computed_examples() {
    let m = build_bigram_model(&[vec![N, E, N, E]], Smoothing::None).unwrap();
    assert_eq!(m.conditional(N, E), 1.0);
    assert_eq!(m.conditional(E, N), 1.0);
    assert!(m.conditional_entropy_nats.abs() < 1e-9);
    assert!((m.unigram_entropy_nats - 2f64.ln()).abs() < 1e-9);

    let same = build_bigram_model(&[vec![N, N, N], vec![N, N]], Smoothing::None).unwrap();
    assert_eq!(same.unigram_entropy_nats, 0.0);
    assert_eq!(same.conditional_entropy_nats, 0.0);

    // no pair across glyphs: [N] then [E] contributes no N->E
    let split = build_bigram_model(&[vec![N], vec![E]], Smoothing::None).unwrap();
    assert!(split.bigram.is_empty());
    assert!(build_bigram_model(&[vec![]], Smoothing::None).is_err());
}

#[test]
fn add_one_smoothing_fills_every_cell() {
    let m = build_bigram_model(&[vec![N, E, N, E]], Smoothing::AddOne).unwrap();
    let mut cells = 0;
    for a in DirectionCode::CCW {
        let row: f64 = DirectionCode::CCW.iter().map(|&b| m.conditional(a, b)).sum();
        assert!((row - 1.0).abs() < 1e-9);
        for b in DirectionCode::CCW {
            assert!(m.conditional(a, b) > 0.0);
            cells += 1;
        }
    }
    assert_eq!(cells, 64);
    assert!((m.unigram.values().sum::<f64>() - 1.0).abs() < 1e-9);
}

fn random_corpus(rng: &mut ChaCha8Rng) -> Vec<Vec<DirectionCode>> {
    let glyphs = rng.gen_range(5..40);
    let skew = rng.gen_range(1..8);
    (0..glyphs)
        .map(|_| {
            let n = rng.gen_range(1..12);
            (0..n)
                .map(|_| DirectionCode::CCW[rng.gen_range(0..8usize).min(rng.gen_range(skew..=8) - 1)])
                .collect()
        })
        .collect()
}

#[test]
fn bigram_properties_on_random_corpora() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let corpus = random_corpus(&mut rng);
        let m = build_bigram_model(&corpus, Smoothing::None).unwrap();
        assert!((m.unigram.values().sum::<f64>() - 1.0).abs() < 1e-9);
        for row in m.bigram.values() {
            assert!((row.values().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        assert!(m.unigram_entropy_nats >= 0.0 && m.conditional_entropy_nats >= 0.0);
        assert!(m.conditional_entropy_nats <= m.unigram_entropy_nats + 1e-12);
    }
}

#[test]
fn bigram_on_synthetic_scripts() {
    for (i, doc) in synthetic_stages(20, 8).iter().enumerate() {
        let seqs: Vec<Vec<DirectionCode>> = seg_all(doc).into_iter().map(|(_, s)| s.stroke_inventory_key).collect();
        let m = build_bigram_model(&seqs, Smoothing::None).unwrap();
        assert!(m.conditional_entropy_nats <= m.unigram_entropy_nats + 1e-12, "stage {i}");
    }
}

#[test]
fn conditional_can_exceed_unigram_without_cross_glyph_pairs() {
    // every glyph starts with N, then two codes drawn from the rest
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let corpus: Vec<Vec<DirectionCode>> = (0..400)
        .map(|_| vec![N, DirectionCode::CCW[rng.gen_range(0..8)], DirectionCode::CCW[rng.gen_range(0..8)]])
        .collect();
    let m = build_bigram_model(&corpus, Smoothing::None).unwrap();
    assert!(m.conditional_entropy_nats > m.unigram_entropy_nats);
}

#[test]
fn similarity_matrix_properties() {
    let doc = synthetic_script("sim", &WriterStyle::cursive(), 8, 4);
    let mut items: Vec<(&Glyph, Option<&glyphometrics::Trajectory>)> = doc
        .corpus
        .glyphs
        .iter()
        .map(|g| (g, doc.trajectories.get(&g.id)))
        .collect();
    let dup = Glyph { id: "dup".into(), ..doc.corpus.glyphs[0].clone() };
    items.push((&dup, doc.trajectories.get(&doc.corpus.glyphs[0].id)));
    let m = similarity_matrix(&items, DistinctivityMode::Trajectory, 64).unwrap();
    let n = m.glyph_ids.len();
    for i in 0..n {
        assert_eq!(m.values[i][i], Some(0.0));
        for j in 0..n {
            assert_eq!(m.values[i][j], m.values[j][i]);
            assert!(m.values[i][j].unwrap() >= 0.0);
        }
    }
    assert_eq!(m.values[0][n - 1], Some(0.0));

    // reordering permutes rows and columns together
    let mut rev = items.clone();
    rev.reverse();
    let r = similarity_matrix(&rev, DistinctivityMode::Trajectory, 64).unwrap();
    for i in 0..n {
        for j in 0..n {
            assert_eq!(m.values[i][j], r.values[n - 1 - i][n - 1 - j]);
        }
    }
}

#[test]
fn degenerate_glyph_is_flagged_not_fatal() {
    let (a, _) = fixtures::l_shape();
    let (b, _) = fixtures::s_curve();
    let dot = Glyph::new("dot", "s", vec![SplineSegment::line(Point::new(1.0, 1.0), Point::new(1.0, 1.0))]);
    let m = similarity_matrix(&[(&a, None), (&dot, None), (&b, None)], DistinctivityMode::Static, 32).unwrap();
    assert!(m.flagged.contains_key("dot"));
    assert!(m.values[1].iter().all(Option::is_none));
    assert!(m.values[0][2].is_some());
    assert!(similarity_matrix(&[(&a, None)], DistinctivityMode::Static, 32).is_err());
}

fn script_with_length(id: &str, len: f64) -> ScriptMetrics {
    let g = line_glyph(&format!("{id}-g"), len);
    aggregate(id, &[g], &[with_length(&format!("{id}-g"), len)], Weighting::Uniform, Binning::default()).unwrap()
}

#[test]
fn parallel_coordinates_normalization() {
    let two = [script_with_length("a", 2.0), script_with_length("b", 4.0)];
    let pc = export_parallel_coordinates(&two, &["length"], false).unwrap();
    assert_eq!(pc.rows.len(), 2);
    assert_eq!(pc.rows[0].normalized, vec![Some(0.0)]);
    assert_eq!(pc.rows[1].normalized, vec![Some(1.0)]);
    assert_eq!(pc.bounds, vec![(2.0, 4.0)]);
    assert_eq!(pc.rows[1].raw, vec![Some(4.0)]);

    let one = export_parallel_coordinates(&two[..1], &["length", "size"], true).unwrap();
    assert_eq!(one.rows.len(), 2);
    for row in &one.rows {
        assert!(row.normalized.iter().all(|v| *v == Some(0.5)));
    }

    let dropped = export_parallel_coordinates(&two, &["length", "lb_index", "bogus"], false).unwrap();
    assert_eq!(dropped.fields, vec!["length".to_string()]);
    assert_eq!(dropped.warnings.len(), 2);
    assert!(export_parallel_coordinates(&two, &[], false).is_err());
    assert!(export_parallel_coordinates(&[], &["length"], false).is_err());
}

#[test]
fn direction_summary_examples() {
    let down = |id: &str| {
        let g = line_glyph(id, 1.0);
        let t = glyphometrics::Trajectory::new(
            id,
            vec![glyphometrics::PenStroke::new(vec![glyphometrics::DirectedPass::forward(0)])],
            glyphometrics::Provenance::Manual,
        );
        segment(&g, &t, &SegmentationConfig::default()).unwrap()
    };
    let segs = [down("a"), down("b")];
    let items: Vec<(&str, &SegmentationResult)> = vec![("a", &segs[0]), ("b", &segs[1])];
    let d = direction_summary(&items);
    assert_eq!(d.major.modal, Some(S));
    assert_eq!(d.major.count(S), 2);

    // one glyph per code: tie broken by N, NE, E, ... order
    let mut segs = Vec::new();
    for k in 0..8 {
        let a = (45.0 * k as f64).to_radians();
        let g = Glyph::new("c", "s", vec![SplineSegment::line(Point::ORIGIN, Point::new(a.cos(), a.sin()))]);
        let t = glyphometrics::Trajectory::new(
            "c",
            vec![glyphometrics::PenStroke::new(vec![glyphometrics::DirectedPass::forward(0)])],
            glyphometrics::Provenance::Manual,
        );
        segs.push(segment(&g, &t, &SegmentationConfig::default()).unwrap());
    }
    let items: Vec<(&str, &SegmentationResult)> = segs.iter().map(|s| ("c", s)).collect();
    let d = direction_summary(&items);
    assert_eq!(d.major.modal, Some(N));
    assert!(d.major.counts.iter().all(|(_, k)| *k == 1));
    let order: Vec<DirectionCode> = d.initial.counts.iter().map(|(c, _)| *c).collect();
    assert_eq!(order, vec![N, NE, E, SE, S, SW, W, NW]);

    let mut empty = segs[0].clone();
    empty.strokes.clear();
    let d = direction_summary(&[("void", &empty), ("c", &segs[0])]);
    assert_eq!(d.warnings.len(), 1);
    assert_eq!(d.major.counts.iter().map(|(_, k)| k).sum::<usize>(), 1);
}

#[test]
fn stage_scripts_differ_in_character() {
    let stages = synthetic_stages(30, 1);
    let means: Vec<BTreeMap<String, Option<f64>>> = stages
        .iter()
        .map(|doc| aggregate(&doc.corpus.id, &doc.corpus.glyphs, &records(doc), Weighting::Uniform, Binning::default()).unwrap().means)
        .collect();
    // later stages are more cursive: fewer pen lifts per glyph
    let pen = |m: &BTreeMap<String, Option<f64>>| m["count_pen_strokes"].unwrap();
    assert!(pen(&means[0]) > pen(&means[2]));
}
