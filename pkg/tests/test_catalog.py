import random

import pytest

from signcol.catalog import (
    Catalog,
    DeletionRestrictedError,
    DuplicateError,
    InvalidValueError,
    MissingReferenceError,
    SignCategory,
)


@pytest.fixture
def catalog(tmp_path):
    with Catalog(tmp_path / "test.db") as cat:
        yield cat


def brute_force_stats(catalog):
    """Recount stats straight from full table scans, independently of category_stats."""
    items = catalog.items()
    recordings = catalog.recordings()
    by_id = {item.id: item for item in items}
    defined = {cat: 0 for cat in SignCategory}
    recorded = {cat: 0 for cat in SignCategory}
    for item in items:
        defined[item.category] += 1
    for entry in recordings:
        recorded[by_id[entry.item_id].category] += 1
    return defined, recorded


def test_category_enum_is_complete():
    assert len(SignCategory) == 8
    assert SignCategory.CAT1.description == "Number < 10"
    assert SignCategory.CAT7.description == "Sentence by Signs"
    assert SignCategory.parse("cat4") is SignCategory.CAT4
    assert SignCategory.parse(4) is SignCategory.CAT4
    assert SignCategory.parse("4") is SignCategory.CAT4
    with pytest.raises(InvalidValueError):
        SignCategory.parse("cat9")


def test_define_language_twice_is_duplicate(catalog):
    catalog.define_language("English")
    with pytest.raises(DuplicateError):
        catalog.define_language("English")


def test_language_uniqueness_is_case_insensitive(catalog):
    catalog.define_language("English")
    with pytest.raises(DuplicateError):
        catalog.define_language("eNgLiSh")


def test_define_item_persists_category(catalog):
    english = catalog.define_language("English")
    item = catalog.define_item("I love you", SignCategory.CAT7, english.id)
    assert catalog.get_item(item.id).category == SignCategory.CAT7


def test_define_item_with_unknown_language_fails(catalog):
    with pytest.raises(MissingReferenceError):
        catalog.define_item("4", SignCategory.CAT1, 999)


def test_same_item_name_allowed_across_languages(catalog):
    english = catalog.define_language("English")
    german = catalog.define_language("German")
    catalog.define_item("Mom", SignCategory.CAT4, english.id)
    catalog.define_item("Mom", SignCategory.CAT4, german.id)
    with pytest.raises(DuplicateError):
        catalog.define_item("Mom", SignCategory.CAT4, english.id)


def test_performer_age_validation(catalog):
    with pytest.raises(InvalidValueError):
        catalog.define_performer("Rita", 200, "123")
    with pytest.raises(InvalidValueError):
        catalog.define_performer("Rita", 0, "123")
    performer = catalog.define_performer("Rita", 130, "123")
    assert performer.age == 130


def test_blank_names_rejected(catalog):
    with pytest.raises(InvalidValueError):
        catalog.define_language("   ")
    with pytest.raises(InvalidValueError):
        catalog.define_performer("", 30)


def test_ids_assigned_monotonically(catalog):
    ids = [catalog.define_language(name).id for name in ("A", "B", "C")]
    assert ids == sorted(ids)
    assert len(set(ids)) == 3


def setup_recording_prereqs(catalog):
    language = catalog.define_language("English")
    item = catalog.define_item("Mom", SignCategory.CAT4, language.id)
    performer = catalog.define_performer("Rita", 30, "555")
    return item, performer


def test_register_recording_updates_stats(catalog):
    item, performer = setup_recording_prereqs(catalog)
    before = catalog.category_stats()
    assert before.recordings[SignCategory.CAT4] == 0
    catalog.register_recording("/data/x_cat4_Mom_Rita_000001", item.id, performer.id, 10)
    after = catalog.category_stats()
    assert after.recordings[SignCategory.CAT4] == 1
    assert after.defined_items[SignCategory.CAT4] == 1


def test_register_recording_unknown_performer_fails(catalog):
    item, _ = setup_recording_prereqs(catalog)
    with pytest.raises(MissingReferenceError):
        catalog.register_recording("/data/f", item.id, 9999, 5)


def test_register_same_folder_twice_fails(catalog):
    item, performer = setup_recording_prereqs(catalog)
    catalog.register_recording("/data/f", item.id, performer.id, 5)
    with pytest.raises(DuplicateError):
        catalog.register_recording("/data/f", item.id, performer.id, 5)


def test_empty_catalog_stats_all_zero(catalog):
    stats = catalog.category_stats()
    assert all(v == 0 for v in stats.defined_items.values())
    assert all(v == 0 for v in stats.recordings.values())
    assert len(stats.as_rows()) == 8


def test_stats_counts_recordings_per_category(catalog):
    language = catalog.define_language("English")
    performer = catalog.define_performer("P", 20)
    items = [catalog.define_item(f"w{i}", SignCategory.CAT4, language.id) for i in range(3)]
    for count, item in zip((2, 0, 1), items):
        for k in range(count):
            catalog.register_recording(f"/d/{item.id}_{k}", item.id, performer.id, 1)
    stats = catalog.category_stats()
    assert stats.defined_items[SignCategory.CAT4] == 3
    assert stats.recordings[SignCategory.CAT4] == 3


def test_list_items_search_is_case_insensitive_substring(catalog):
    language = catalog.define_language("English")
    for name in ("Mom", "My", "I"):
        catalog.define_item(name, SignCategory.CAT4, language.id)
    names = [item.name for item, _ in catalog.list_items(SignCategory.CAT4, "m")]
    assert names == ["Mom", "My"]
    assert [i.name for i, _ in catalog.list_items(SignCategory.CAT4, "")] == ["I", "Mom", "My"]
    assert catalog.list_items(SignCategory.CAT2) == []


def test_list_items_carries_recording_counts(catalog):
    language = catalog.define_language("English")
    performer = catalog.define_performer("P", 20)
    mom = catalog.define_item("Mom", SignCategory.CAT4, language.id)
    catalog.define_item("My", SignCategory.CAT4, language.id)
    catalog.register_recording("/d/1", mom.id, performer.id, 4)
    counts = {item.name: count for item, count in catalog.list_items(SignCategory.CAT4)}
    assert counts == {"Mom": 1, "My": 0}


def test_deletion_is_restricted_by_dependents(catalog):
    item, performer = setup_recording_prereqs(catalog)
    catalog.register_recording("/d/x", item.id, performer.id, 2)
    with pytest.raises(DeletionRestrictedError):
        catalog.delete_item(item.id)
    with pytest.raises(DeletionRestrictedError):
        catalog.delete_performer(performer.id)
    with pytest.raises(DeletionRestrictedError):
        catalog.delete_language(catalog.languages()[0].id)


def test_delete_unreferenced_rows(catalog):
    language = catalog.define_language("Temp")
    catalog.delete_language(language.id)
    assert catalog.languages() == []
    with pytest.raises(MissingReferenceError):
        catalog.delete_language(language.id)


def test_options_round_trip(catalog):
    assert catalog.get_option("output_root") is None
    assert catalog.get_option("output_root", "/default") == "/default"
    catalog.set_option("output_root", "/data")
    catalog.set_option("output_root", "/data2")
    assert catalog.get_option("output_root") == "/data2"


def test_reopen_preserves_all_rows(tmp_path):
    path = tmp_path / "persist.db"
    with Catalog(path) as catalog:
        item, performer = setup_recording_prereqs(catalog)
        catalog.register_recording("/d/a", item.id, performer.id, 7)
        catalog.set_option("k", "v")
        expected = (
            catalog.languages(),
            catalog.items(),
            catalog.performers(),
            catalog.recordings(),
        )
    with Catalog(path) as reopened:
        assert (
            reopened.languages(),
            reopened.items(),
            reopened.performers(),
            reopened.recordings(),
        ) == expected
        assert reopened.get_option("k") == "v"


def test_random_crud_trace_stats_match_brute_force(tmp_path):
    """500 random operations; after each, category_stats equals a full recount."""
    rng = random.Random(99)
    with Catalog(tmp_path / "trace.db") as catalog:
        for step in range(500):
            op = rng.random()
            try:
                if op < 0.15:
                    catalog.define_language(f"lang{rng.randrange(20)}")
                elif op < 0.45:
                    languages = catalog.languages()
                    if languages:
                        catalog.define_item(
                            f"item{rng.randrange(60)}",
                            rng.choice(list(SignCategory)),
                            rng.choice(languages).id,
                        )
                elif op < 0.6:
                    catalog.define_performer(f"p{rng.randrange(30)}", rng.randrange(1, 131))
                elif op < 0.9:
                    items = catalog.items()
                    performers = catalog.performers()
                    if items and performers:
                        catalog.register_recording(
                            f"/data/rec{step}",
                            rng.choice(items).id,
                            rng.choice(performers).id,
                            rng.randrange(1, 200),
                        )
                elif op < 0.95:
                    items = catalog.items()
                    if items:
                        catalog.delete_item(rng.choice(items).id)
                else:
                    performers = catalog.performers()
                    if performers:
                        catalog.delete_performer(rng.choice(performers).id)
            except (DuplicateError, DeletionRestrictedError):
                pass

            stats = catalog.category_stats()
            defined, recorded = brute_force_stats(catalog)
            assert stats.defined_items == defined
            assert stats.recordings == recorded

        # referential integrity after the whole trace
        items = {i.id for i in catalog.items()}
        performers = {p.id for p in catalog.performers()}
        languages = {l.id for l in catalog.languages()}
        for entry in catalog.recordings():
            assert entry.item_id in items
            assert entry.performer_id in performers
        for item in catalog.items():
            assert item.language_id in languages
