use glyphometrics::fixtures;
use glyphometrics::geometry::{Point, SplineSegment};
use glyphometrics::metrics::{cognitive_counts, disfluency, stroke_counts};
use glyphometrics::segment::*;
use glyphometrics::{
    DirectedPass, DirectionCode, Glyph, LandmarkKind, LandmarkSource, PenStroke, Provenance, Trajectory, UpDown,
};

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn seg(g: &Glyph, t: &Trajectory) -> SegmentationResult {
    segment(g, t, &SegmentationConfig::default()).unwrap()
}

#[test]
fn worked_character_counts() {
    let (g, t) = fixtures::worked_character();
    let s = seg(&g, &t);
    let c = stroke_counts(&s);
    assert_eq!(c.pen_strokes, 1);
    assert_eq!(c.disjointed, 3);
    assert_eq!(c.primitive, 8);
    assert_eq!(c.retraces, 1);
    assert_eq!(disfluency(&s).0, 6);
    // the retrace is the third movement
    assert_eq!(s.retraces, vec![(1, 2)]);
    use DirectionCode::*;
    assert_eq!(s.stroke_inventory_key, vec![N, E, W, S, S, NW, SE, SW]);
}

#[test]
fn worked_character_codes_are_the_distinct_codes_in_order() {
    let (g, t) = fixtures::worked_character();
    let s = seg(&g, &t);
    let mut distinct = Vec::new();
    for c in &s.stroke_inventory_key {
        if !distinct.contains(c) {
            distinct.push(*c);
        }
    }
    use DirectionCode::*;
    assert_eq!(distinct, vec![N, E, W, S, NW, SE, SW]);
}

#[test]
fn straight_has_no_landmarks() {
    let (g, t) = fixtures::straight();
    let s = seg(&g, &t);
    assert!(s.landmarks.is_empty());
    assert_eq!(s.strokes.len(), 1);
    let c = stroke_counts(&s);
    assert_eq!((c.primitive, c.pen_strokes, c.disjointed, c.retraces), (1, 1, 1, 0));
    assert_eq!((c.downstrokes, c.upstrokes), (1, 0));
}

#[test]
fn ell_has_one_sharp_junction_at_the_corner() {
    let (g, t) = fixtures::l_shape();
    let s = seg(&g, &t);
    assert_eq!(s.landmarks.len(), 1);
    assert_eq!(s.landmarks[0].kind, LandmarkKind::SharpJunction);
    assert_eq!(s.landmarks[0].location, p(0.0, 0.0));
    assert_eq!(s.strokes.len(), 2);
}

#[test]
fn s_curve_has_two_extrema_at_the_dense_scan_peaks() {
    let (g, t) = fixtures::s_curve();
    let s = seg(&g, &t);
    assert_eq!(s.landmarks.len(), 2);
    assert!(s.landmarks.iter().all(|l| l.kind == LandmarkKind::CurvatureExtremum));
    // 10x denser scan of |k|; a peak's prominence is its height above the
    // higher of the two minima reached before a taller sample on each side
    let curve = &g.segments[0];
    let n = 1280;
    let k: Vec<f64> = (0..=n)
        .map(|i| curve.curvature_at(i as f64 / n as f64).unwrap().abs())
        .collect();
    let kmax = k.iter().copied().fold(0.0, f64::max);
    let prominence = |i: usize| {
        let mut left = k[i];
        for j in (0..i).rev() {
            if k[j] > k[i] {
                break;
            }
            left = left.min(k[j]);
        }
        let mut right = k[i];
        for &v in &k[i + 1..] {
            if v > k[i] {
                break;
            }
            right = right.min(v);
        }
        k[i] - left.max(right)
    };
    let peaks: Vec<Point> = (1..n)
        .filter(|&i| k[i] > k[i - 1] && k[i] >= k[i + 1] && prominence(i) >= 0.05 * kmax)
        .map(|i| curve.eval(i as f64 / n as f64))
        .collect();
    assert_eq!(peaks.len(), 2);
    for (l, q) in s.landmarks.iter().zip(&peaks) {
        assert!(l.location.distance(*q) < 0.02 * g.diagonal(), "{:?} vs {:?}", l.location, q);
    }
}

#[test]
fn s_curve_rdp_count_within_one_of_landmark_count() {
    let (g, t) = fixtures::s_curve();
    let s = seg(&g, &t);
    let (lm, rdp) = cognitive_counts(&s, 0.02 * g.diagonal()).unwrap();
    assert_eq!(lm, 4);
    assert!((rdp as i64 - lm as i64).abs() <= 1, "rdp {rdp} landmarks {lm}");
}

#[test]
fn two_pen_strokes_give_a_pen_drag() {
    let (g, t) = fixtures::two_strokes();
    let s = seg(&g, &t);
    assert_eq!(s.strokes.len(), 3);
    assert_eq!(s.visible().count(), 2);
    let drag: Vec<_> = s.invisible().collect();
    assert_eq!(drag.len(), 1);
    assert_eq!(drag[0].start(), p(0.0, 0.0));
    assert_eq!(drag[0].end(), p(1.0, 1.0));
    assert!((drag[0].length - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(s.landmarks.len(), 1);
    assert_eq!(s.landmarks[0].kind, LandmarkKind::PenEvent);
    assert_eq!(disfluency(&s), (1, 1));
}

#[test]
fn override_adds_and_removes_landmarks() {
    let (g, t) = fixtures::straight();
    let s = seg(&g, &t);
    let added = override_landmarks(&g, &t, &s, &[p(0.0, 0.5)], &[]).unwrap();
    assert_eq!(added.strokes.len(), 2);
    assert_eq!(added.landmarks[0].source, LandmarkSource::Manual);
    assert!((added.strokes[0].length - 0.5).abs() < 1e-9);

    let removed = override_landmarks(&g, &t, &added, &[], &[0]).unwrap();
    assert_eq!(removed.strokes.len(), 1);

    let off = p(5.0 * g.tolerance(), 0.5);
    assert!(override_landmarks(&g, &t, &s, &[off], &[]).is_err());
    assert!(override_landmarks(&g, &t, &s, &[], &[3]).is_err());
}

#[test]
fn removing_the_only_landmark_merges_the_strokes() {
    let (g, t) = fixtures::l_shape();
    let s = seg(&g, &t);
    let merged = override_landmarks(&g, &t, &s, &[], &[0]).unwrap();
    assert_eq!(merged.strokes.len(), 1);
    assert!((merged.strokes[0].length - 1.6).abs() < 1e-9);
}

#[test]
fn direction_codes_and_updown_boundaries() {
    let stroke = |deg: f64| {
        let d = p(deg.to_radians().cos(), deg.to_radians().sin());
        let (g, t) = {
            let g = Glyph::new("d", "x", vec![SplineSegment::line(Point::ORIGIN, d)]);
            let t = Trajectory::new("d", vec![PenStroke::new(vec![DirectedPass::forward(0)])], Provenance::Manual);
            (g, t)
        };
        seg(&g, &t).strokes[0].clone()
    };
    assert_eq!(quantize_direction(&stroke(90.0)).unwrap(), DirectionCode::N);
    assert_eq!(quantize_direction(&stroke(100.0)).unwrap(), DirectionCode::N);
    assert_eq!(quantize_direction(&stroke(112.5)).unwrap(), DirectionCode::NW);
    assert_eq!(classify_updown(&stroke(270.0)).unwrap(), UpDown::Down);
    assert_eq!(classify_updown(&stroke(90.0)).unwrap(), UpDown::Up);
    assert_eq!(updown_for_angle(210.0), UpDown::Down);
    assert_eq!(updown_for_angle(330.0), UpDown::Down);
    assert_eq!(updown_for_angle(209.999), UpDown::Up);
    // rotating by 45 degrees moves every code one sector counterclockwise
    for k in 0..8 {
        let a = 45.0 * k as f64 + 10.0;
        let c0 = quantize_direction(&stroke(a)).unwrap();
        let c1 = quantize_direction(&stroke(a + 45.0)).unwrap();
        assert_eq!((c0.ccw_index() + 1) % 8, c1.ccw_index());
    }
}

#[test]
fn zero_length_stroke_cannot_be_classified() {
    let (g, t) = fixtures::straight();
    let mut s = seg(&g, &t).strokes[0].clone();
    s.length = 0.0;
    assert!(quantize_direction(&s).is_err());
    assert!(classify_updown(&s).is_err());
}

#[test]
fn retrace_detection() {
    let up_down = Glyph::new("r", "x", vec![SplineSegment::line(p(0.0, 0.0), p(0.0, 1.0))]);
    let t = Trajectory::new(
        "r",
        vec![PenStroke::new(vec![DirectedPass::forward(0), DirectedPass::forward(0).retraced()])],
        Provenance::Manual,
    );
    assert_eq!(seg(&up_down, &t).retraces, vec![(0, 1)]);
    let (g, t) = fixtures::two_strokes();
    assert!(seg(&g, &t).retraces.is_empty());
}

#[test]
fn structural_invariants_on_synthetic_glyphs() {
    let doc = fixtures::synthetic_script("inv", &fixtures::WriterStyle::mixed(), 25, 17);
    for g in &doc.corpus.glyphs {
        let t = &doc.trajectories[&g.id];
        let s = seg(g, t);
        let path: f64 = t.passes().map(|p| p.curve(g).arc_length()).sum();
        let visible: f64 = s.visible().map(|x| x.length).sum();
        assert!((visible - path).abs() <= 1e-6 * path, "{}", g.id);
        // primitive count = visible pieces cut at landmarks + pen-drags
        let c = stroke_counts(&s);
        assert_eq!(c.primitive, s.strokes.len());
        assert_eq!(s.invisible().count(), t.pen_strokes.len() - 1);
        assert_eq!(c.upstrokes + c.downstrokes, s.visible().count());
        let (disf, disjoint) = disfluency(&s);
        assert!(disf >= disjoint);
        // strokes chain end to start in writing order
        for w in s.strokes.windows(2) {
            assert!(w[0].end().distance(w[1].start()) <= 1e-6 * g.diagonal());
        }
        // every interior boundary is a landmark or a segment joint
        assert_eq!(seg(g, t), s);
    }
}
