use hyperform_core::census::{
    census_record, census_table, cross_section_orientable, cube_symmetry_equivalent, digit_matrix,
    exclude_1011_cover, exclude_closed_hypersurface, exclude_cover, exclusion_threshold,
    manifold_1011, orbit, parse_code, side_pairing_orientable, CrossSectionCode, CubeSymmetry,
    ReflectionGroupK, RuleId, SidePairingCode, Verdict, WEEKS_VOLUME,
};

fn code(s: &str) -> CrossSectionCode {
    s.parse().unwrap()
}

#[test]
fn code_expansion() {
    let c = parse_code("14FF28").unwrap();
    assert_eq!(c.expanded(), "11114444FFFFFFFF22228888");
    assert_eq!(SidePairingCode::from_expanded(&c.expanded()).unwrap(), c);
    assert_eq!(parse_code("111111").unwrap().expanded(), "1".repeat(24));
    assert!(parse_code("14FF2").is_err());
    assert!(parse_code("14FF2G").is_err());
    assert!(SidePairingCode::from_expanded("11124444FFFFFFFF22228888").is_err());
}

#[test]
fn orientability_by_determinant() {
    // oracle: a digit's sign matrix reverses orientation iff its determinant is -1
    for k in 0u8..8 {
        let det: i32 = digit_matrix(k).unwrap().iter().map(|&x| x as i32).product();
        assert_eq!(side_pairing_orientable(k).unwrap(), det == -1, "k = {k}");
    }
    assert_eq!(digit_matrix(7).unwrap(), [-1, -1, -1, 1]);
    assert_eq!(digit_matrix(1).unwrap(), [-1, 1, 1, 1]);
    assert!(side_pairing_orientable(8).is_err());
    for s in ["147", "714", "274", "172"] {
        assert!(cross_section_orientable(&code(s)));
    }
    assert!(!cross_section_orientable(&code("143")));
}

#[test]
fn symmetry_group_structure() {
    let all = CubeSymmetry::all();
    assert_eq!(all.len(), 48);
    assert_eq!(all.iter().filter(|s| s.is_rotation()).count(), 24);
    for s in &all {
        assert_eq!(s.compose(&s.inverse()), CubeSymmetry::identity());
        for t in &all {
            assert!(all.contains(&s.compose(t)));
        }
    }
}

#[test]
fn equivalence_relation_on_orientable_codes() {
    let digits = [1u8, 2, 4, 7];
    let mut codes = Vec::new();
    for a in digits {
        for b in digits {
            for c in digits {
                codes.push(CrossSectionCode::new([a, b, c]).unwrap());
            }
        }
    }
    assert_eq!(codes.len(), 64);
    for x in &codes {
        assert_eq!(cube_symmetry_equivalent(x, x).map(|s| s.act(x)), Some(*x));
        for y in &codes {
            let xy = cube_symmetry_equivalent(x, y);
            if let Some(s) = xy {
                assert_eq!(s.act(x), *y);
                assert_eq!(s.inverse().act(y), *x);
                assert!(cube_symmetry_equivalent(y, x).is_some());
                for z in &codes {
                    if let Some(t) = cube_symmetry_equivalent(y, z) {
                        assert_eq!(t.compose(&s).act(x), *z);
                    }
                }
            } else {
                assert!(cube_symmetry_equivalent(y, x).is_none());
            }
        }
    }
}

#[test]
fn orbit_of_reference() {
    let o = orbit(&code("147"));
    for s in ["714", "274", "172"] {
        assert!(o.contains(&code(s)), "{s}");
    }
    assert_eq!(cube_symmetry_equivalent(&code("147"), &code("147")), Some(CubeSymmetry::identity()));
}

#[test]
fn reflection_group() {
    let k = ReflectionGroupK::new();
    assert_eq!(k.order(), 16);
    for &g in &k.elements {
        assert!(k.elements.contains(&(g ^ g)));
        for &h in &k.elements {
            assert!(k.elements.contains(&(g ^ h)));
        }
    }
    for g in k.generators {
        assert_eq!(ReflectionGroupK::matrix(g).iter().filter(|&&x| x == -1).count(), 1);
    }
}

#[test]
fn table_rules() {
    let t = census_table();
    assert_eq!(t.len(), 22);
    assert_eq!((t[0].b1, t[0].orientable_cross_sections), (3, 3));
    for rec in &t {
        let expected = match rec.index {
            1 => RuleId::L3,
            2..=15 => RuleId::L2,
            _ => RuleId::L1,
        };
        let trace = exclude_closed_hypersurface(rec);
        assert_eq!(trace.verdict, Verdict::Excluded(expected), "record {}", rec.index);
        let last = trace.steps.last().unwrap();
        assert!(last.excludes && last.applicable);
        assert!(trace.steps[..trace.steps.len() - 1].iter().all(|s| !s.excludes));
    }
}

#[test]
fn raising_b1_defeats_every_rule() {
    for rec in census_table() {
        let mut raised = rec;
        raised.b1 = exclusion_threshold(&rec);
        assert_eq!(exclude_closed_hypersurface(&raised).verdict, Verdict::NotExcluded, "{}", rec.index);
        raised.b1 -= 1;
        assert!(exclude_closed_hypersurface(&raised).verdict.is_excluded());
    }
    assert!(census_record(23).is_err());
}

#[test]
fn cover_trace() {
    let trace = exclude_1011_cover();
    assert_eq!(trace.verdict, Verdict::Excluded(RuleId::Volume));
    let rules: Vec<RuleId> = trace.steps.iter().map(|s| s.rule).collect();
    assert_eq!(
        rules,
        [RuleId::Code, RuleId::Orientability, RuleId::Symmetry, RuleId::Lift, RuleId::Copies, RuleId::Volume]
    );
    assert!(trace.to_string().contains("28.9 > 26.3: contradiction"));
    let copies = &trace.steps[4];
    assert_eq!(copies.inputs["reflection_group_order"], 16);
    let json = serde_json::to_value(&trace).unwrap();
    assert_eq!(json["verdict"]["verdict"], "excluded");
}

#[test]
fn cover_trace_stops_on_bad_data() {
    let mut rec = manifold_1011();
    rec.k_codes[0] = code("143");
    let trace = exclude_cover(&rec, WEEKS_VOLUME).unwrap();
    assert_eq!(trace.verdict, Verdict::NotExcluded);
    assert_eq!(trace.steps.last().unwrap().rule, RuleId::Orientability);

    let mut rec = manifold_1011();
    rec.k_codes = vec![code("111")];
    let trace = exclude_cover(&rec, WEEKS_VOLUME).unwrap();
    assert_eq!(trace.verdict, Verdict::NotExcluded);

    // a smaller lower bound on the hypersurface volume gives no contradiction
    let trace = exclude_cover(&manifold_1011(), 0.5).unwrap();
    assert_eq!(trace.verdict, Verdict::NotExcluded);
    assert!(trace.steps.last().unwrap().outcome.contains("no contradiction"));
}
