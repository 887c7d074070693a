import pytest
from hypothesis import given
from hypothesis import strategies as st

from tagpolicy.errors import (
    DuplicateRowWarning,
    DuplicateTag,
    EmptyName,
    EmptyScenario,
    EmptyUniverse,
    UnknownTag,
    UnknownTarget,
    ValidationError,
)
from tagpolicy.model import (
    Dataset,
    DatasetRow,
    Decision,
    build_universe,
    make_scenario,
)


@pytest.fixture
def universe():
    return build_universe(["Home", "Photo", "Work", "Document", "Memo"])


class TestDecision:
    def test_words_and_bits(self):
        assert Decision.DENY.word == "deny"
        assert Decision.ALLOW.word == "allow"
        assert int(Decision.DENY) == 0
        assert int(Decision.ALLOW) == 1

    def test_from_int(self):
        assert Decision.from_int(0) is Decision.DENY
        assert Decision.from_int(1) is Decision.ALLOW
        with pytest.raises(ValueError, match="decision must be 0 or 1"):
            Decision.from_int(2)

    def test_flipped(self):
        assert Decision.DENY.flipped() is Decision.ALLOW
        assert Decision.ALLOW.flipped() is Decision.DENY


class TestUniverse:
    def test_build_and_lookup(self, universe):
        assert universe.n == 5
        assert universe.names == ("Home", "Photo", "Work", "Document", "Memo")
        assert universe.id_of("Work") == 2
        assert universe.name_of(2) == "Work"
        assert "Work" in universe
        assert "Note" not in universe

    def test_empty_universe(self):
        with pytest.raises(EmptyUniverse):
            build_universe([])

    def test_duplicate_tag(self):
        with pytest.raises(DuplicateTag):
            build_universe(["a", "b", "a"])

    def test_empty_name(self):
        with pytest.raises(EmptyName):
            build_universe(["a", ""])

    def test_unknown_tag(self, universe):
        with pytest.raises(UnknownTag):
            universe.id_of("Note")

    def test_structural_equality(self, universe):
        again = build_universe(list(universe.names))
        assert universe == again
        assert hash(universe) == hash(again)
        assert universe != build_universe(["Home"])


class TestScenario:
    def test_members_sorted_and_deduplicated(self, universe):
        scenario = make_scenario(universe, ["Work", "Home", "Work"])
        assert scenario.members == (0, 2)
        assert scenario.names == ("Home", "Work")

    def test_empty_scenario(self, universe):
        with pytest.raises(EmptyScenario):
            make_scenario(universe, [])

    def test_unknown_tag(self, universe):
        with pytest.raises(UnknownTag):
            make_scenario(universe, ["Home", "Note"])

    def test_repr(self, universe):
        assert repr(make_scenario(universe, ["Photo", "Home"])) == "{Home, Photo}"

    @given(st.lists(st.sampled_from(["Home", "Photo", "Work", "Document", "Memo"]), min_size=1))
    def test_members_always_strictly_increasing(self, names):
        universe = build_universe(["Home", "Photo", "Work", "Document", "Memo"])
        scenario = make_scenario(universe, names)
        assert all(a < b for a, b in zip(scenario.members, scenario.members[1:]))
        assert set(scenario.names) == set(names)


class TestDataset:
    def test_build_and_views(self, universe):
        ds = Dataset.build(
            universe,
            ["WorkCloud"],
            [
                (make_scenario(universe, ["Home", "Photo"]), {"WorkCloud": 0}),
                (make_scenario(universe, ["Document"]), {"WorkCloud": 1}),
            ],
        )
        view = ds.per_target_view("WorkCloud")
        assert [e.decision for e in view] == [Decision.DENY, Decision.ALLOW]
        assert ds.used_tag_ids() == [0, 1, 3]

    def test_rows_accept_dataset_row_objects(self, universe):
        row = DatasetRow(make_scenario(universe, ["Memo"]), {"T": Decision.ALLOW})
        ds = Dataset.build(universe, ["T"], [row])
        assert ds.rows[0].decisions["T"] is Decision.ALLOW

    def test_unknown_target_view(self, universe):
        ds = Dataset.build(
            universe, ["T"], [(make_scenario(universe, ["Home"]), {"T": 0})]
        )
        with pytest.raises(UnknownTarget):
            ds.per_target_view("Other")

    def test_requires_decision_for_every_target(self, universe):
        with pytest.raises(ValidationError, match="missing decisions"):
            Dataset.build(
                universe,
                ["A", "B"],
                [(make_scenario(universe, ["Home"]), {"A": 0})],
            )

    def test_rejects_decision_for_unknown_target(self, universe):
        with pytest.raises(ValidationError, match="unknown targets"):
            Dataset.build(
                universe,
                ["A"],
                [(make_scenario(universe, ["Home"]), {"A": 0, "B": 1})],
            )

    def test_duplicate_targets_rejected(self, universe):
        with pytest.raises(ValidationError, match="duplicate target"):
            Dataset.build(universe, ["A", "A"], [])

    def test_duplicate_rows_with_equal_labels_merge_with_warning(self, universe):
        rows = [
            (make_scenario(universe, ["Home", "Photo"]), {"T": 0}),
            (make_scenario(universe, ["Photo", "Home"]), {"T": 0}),
        ]
        with pytest.warns(DuplicateRowWarning):
            ds = Dataset.build(universe, ["T"], rows)
        assert len(ds.rows) == 1

    def test_conflicting_duplicate_rows_rejected_with_row_numbers(self, universe):
        rows = [
            (make_scenario(universe, ["Home"]), {"T": 0}),
            (make_scenario(universe, ["Work"]), {"T": 0}),
            (make_scenario(universe, ["Home"]), {"T": 1}),
        ]
        with pytest.raises(ValidationError) as err:
            Dataset.build(universe, ["T"], rows)
        assert "row 0" in str(err.value)
        assert "rows[2]" in str(err.value)

    def test_scenario_from_other_universe_rejected(self, universe):
        other = build_universe(["x", "y"])
        with pytest.raises(ValidationError, match="universe"):
            Dataset.build(
                universe, ["T"], [(make_scenario(other, ["x"]), {"T": 0})]
            )
