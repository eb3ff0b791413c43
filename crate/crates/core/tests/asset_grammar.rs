use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use proptest::prelude::*;
use simasset::asset::{self, AssetError, JointKind, PhysicalAsset};
use simasset::fixtures;

fn fixture_dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(sub)
}

fn fields_of(text: &str) -> Vec<String> {
    match asset::parse_asset(text) {
        Err(AssetError::Invalid(v)) => v.into_iter().map(|x| x.field).collect(),
        other => panic!("expected invariant violations, got {other:?}"),
    }
}

#[test]
fn shipped_assets_reserialize_byte_for_byte() {
    let mut n = 0;
    for entry in fs::read_dir(fixture_dir("assets")).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let a = asset::parse_asset(&text).unwrap();
        assert_eq!(asset::serialize_asset(&a).unwrap(), text, "{}", path.display());
        n += 1;
    }
    assert!(n >= 10);
}

#[test]
fn corpus_matches_shipped_files() {
    for (name, a) in fixtures::asset_corpus() {
        let text = asset::serialize_asset(&a).unwrap();
        let shipped = fs::read_to_string(fixture_dir("assets").join(format!("{name}.asset"))).unwrap();
        assert_eq!(text, shipped, "{name}");
        assert_eq!(asset::parse_asset(&text).unwrap(), a);
    }
}

#[test]
fn shipped_invalid_fixtures_fail_on_the_expected_field() {
    let mut reader = csv::Reader::from_path(fixture_dir("invalid_assets").join("expected.csv")).unwrap();
    let mut n = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let text = fs::read_to_string(fixture_dir("invalid_assets").join(&rec[0])).unwrap();
        let fields = fields_of(&text);
        assert!(fields.iter().any(|f| f == &rec[1]), "{}: {fields:?}", &rec[0]);
        n += 1;
    }
    assert_eq!(n, fixtures::invalid_asset_texts().len());
}

#[test]
fn invalid_fixtures_are_single_edits_of_a_valid_asset() {
    let base = asset::serialize_asset(&fixtures::small_hinge()).unwrap();
    for (stem, text, field) in fixtures::invalid_asset_texts() {
        let changed = base.lines().zip(text.lines()).filter(|(a, b)| a != b).count();
        assert_eq!(changed, 1, "{stem}");
        assert!(fields_of(&text).contains(&field), "{stem}");
        let shipped = fs::read_to_string(fixture_dir("invalid_assets").join(format!("{stem}.invalid"))).unwrap();
        assert_eq!(shipped, text);
    }
}

#[test]
fn serialize_refuses_invalid_assets() {
    let mut a = fixtures::cabinet();
    a.parts[1].joint.axis = [0.0, 0.0, 0.0];
    match asset::serialize_asset(&a) {
        Err(AssetError::Invalid(v)) => assert_eq!(v[0].field, "joint.axis"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn cycle_is_reported_on_parent_links() {
    let mut a = fixtures::toy_car();
    let ids: Vec<u32> = a.parts.iter().map(|p| p.id).collect();
    // Hang the root below a wheel: no root left and a loop through it.
    let child = *ids.iter().find(|&&i| a.part(i).unwrap().parent == Some(ids[0])).unwrap();
    a.parts[0].parent = Some(child);
    let v = asset::validate(&a);
    assert!(v.iter().any(|x| x.field == "parent" && x.rule.contains("cycle")), "{v:?}");
    assert!(v.iter().any(|x| x.field == "parts"));
}

#[test]
fn syntax_errors_carry_positions() {
    let text = asset::serialize_asset(&fixtures::small_hinge()).unwrap();
    let broken = text.replacen("deformable false", "deformable maybe", 1);
    match asset::parse_asset(&broken) {
        Err(AssetError::Syntax(e)) => assert_eq!(e.line, 5),
        other => panic!("{other:?}"),
    }
    let reordered = text.replacen("category", "kategory", 1);
    assert!(matches!(asset::parse_asset(&reordered), Err(AssetError::Syntax(_))));
    assert!(matches!(asset::parse_asset(&format!("{text}extra 1\n")), Err(AssetError::Syntax(_))));
    let bad_geometry = text.replacen("\"P8|", "\"P8|X|", 1);
    assert!(matches!(asset::parse_asset(&bad_geometry), Err(AssetError::Geometry { part: 0, .. })));
}

#[test]
fn joint_kinds_cover_the_corpus() {
    let mut kinds: Vec<JointKind> = fixtures::asset_corpus()
        .iter()
        .flat_map(|(_, a)| a.parts.iter().map(|p| p.joint.kind).collect::<Vec<_>>())
        .collect();
    kinds.sort();
    kinds.dedup();
    assert_eq!(kinds, vec![JointKind::Fixed, JointKind::Revolute, JointKind::Prismatic, JointKind::Continuous]);
}

/// Pairwise ranking oracle: `a` precedes `b` iff it has higher affordance,
/// or equal affordance and a lower id.
fn precedes(a: (u32, f64), b: (u32, f64)) -> bool {
    a.1 > b.1 || (a.1 == b.1 && a.0 < b.0)
}

fn cached(slot: &'static OnceLock<PhysicalAsset>, build: fn() -> PhysicalAsset) -> PhysicalAsset {
    slot.get_or_init(build).clone()
}

static TOY_CAR: OnceLock<PhysicalAsset> = OnceLock::new();
static CABINET: OnceLock<PhysicalAsset> = OnceLock::new();

fn with_affordances(affs: &[f64]) -> PhysicalAsset {
    let mut a = cached(&TOY_CAR, fixtures::toy_car);
    for (p, &x) in a.parts.iter_mut().zip(affs) {
        p.affordance = x;
    }
    a
}

#[test]
fn ranking_example() {
    let r = asset::affordance_ranking(&fixtures::cabinet());
    assert_eq!(r.len(), 2);
    assert_eq!(r[0], 1, "the door outranks the body");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ranking_matches_pairwise_oracle(affs in proptest::collection::vec(prop_oneof![Just(0.5), 0.0f64..=1.0], 5)) {
        let a = with_affordances(&affs);
        let r = asset::affordance_ranking(&a);
        let key = |id: u32| (id, a.part(id).unwrap().affordance);
        for i in 0..r.len() {
            for j in i + 1..r.len() {
                prop_assert!(precedes(key(r[i]), key(r[j])));
            }
        }
        // Monotone transforms of the scores leave the order unchanged.
        let squared = with_affordances(&affs.iter().map(|x| x * x).collect::<Vec<_>>());
        prop_assert_eq!(asset::affordance_ranking(&squared), r);
    }

    #[test]
    fn scale_and_description_round_trip(s in proptest::array::uniform3(1e-3f64..50.0), desc in "[ -~]{0,40}") {
        let mut a = cached(&CABINET, fixtures::cabinet);
        a.scale_m = s;
        a.description = desc;
        let text = asset::serialize_asset(&a).unwrap();
        let back = asset::parse_asset(&text).unwrap();
        prop_assert_eq!(asset::serialize_asset(&back).unwrap(), text);
        prop_assert_eq!(back, a);
    }
}
