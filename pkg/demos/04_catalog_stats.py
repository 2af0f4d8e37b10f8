"""Populate the catalog and read back the statistics that drive collection.

The stats table is what an operator watches to keep the dataset uniform
across the eight sign categories.
"""

from pathlib import Path

from signcol.catalog import Catalog, SignCategory

db = Path("demo_output/catalog.db")
db.parent.mkdir(parents=True, exist_ok=True)
db.unlink(missing_ok=True)

with Catalog(db) as catalog:
    english = catalog.define_language("English")
    rita = catalog.define_performer("Rita", 30, "555-0100")
    ann = catalog.define_performer("Ann", 27, "555-0101")

    items = {
        "4": SignCategory.CAT1,
        "16": SignCategory.CAT2,
        "A": SignCategory.CAT3,
        "Mom": SignCategory.CAT4,
        "My": SignCategory.CAT4,
        "I love you": SignCategory.CAT7,
    }
    for name, category in items.items():
        catalog.define_item(name, category, english.id)

    mom = catalog.list_items(SignCategory.CAT4, "mom")[0][0]
    for take in range(3):
        catalog.register_recording(f"/data/mom_take{take}", mom.id, rita.id, 90)
    love = catalog.list_items(SignCategory.CAT7)[0][0]
    catalog.register_recording("/data/love_take0", love.id, ann.id, 120)

    print(f"{'category':<9} {'description':<20} {'items':>5} {'recordings':>10}")
    for row in catalog.category_stats().as_rows():
        print(
            f"{row['category']:<9} {row['description']:<20}"
            f" {row['defined_item_count']:>5} {row['recording_count']:>10}"
        )

    print("\ncat4 items matching 'm':")
    for item, count in catalog.list_items(SignCategory.CAT4, "m"):
        print(f"  {item.name}: {count} recording(s)")

print(f"\ncatalog persisted at {db}")
