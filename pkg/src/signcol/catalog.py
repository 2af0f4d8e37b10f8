"""Embedded relational catalog: languages, sign items, performers, recordings, options.

Single SQLite file, versioned schema created on open. Writes are serialized
behind one lock and committed per operation, so the store stays consistent
under the service's concurrent request handling.
"""

from __future__ import annotations

import sqlite3
import threading
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path

SCHEMA_VERSION = 1

DEFAULT_DB_FILENAME = "signcol.db"


class CatalogError(Exception):
    """Base class for catalog failures."""


class DuplicateError(CatalogError):
    """A uniqueness constraint would be violated."""


class MissingReferenceError(CatalogError):
    """A referenced row does not exist."""


class InvalidValueError(CatalogError):
    """A field value fails validation."""


class DeletionRestrictedError(CatalogError):
    """Row has dependent rows and cannot be deleted."""


class SignCategory(IntEnum):
    """The eight kinds of capturable sign items, from single digits to free sentences."""

    CAT1 = 1
    CAT2 = 2
    CAT3 = 3
    CAT4 = 4
    CAT5 = 5
    CAT6 = 6
    CAT7 = 7
    CAT8 = 8

    @property
    def label(self) -> str:
        return f"cat{self.value}"

    @property
    def description(self) -> str:
        return _CATEGORY_DESCRIPTIONS[self]

    @classmethod
    def parse(cls, value) -> "SignCategory":
        """Accept 4, "4" or "cat4"."""
        if isinstance(value, SignCategory):
            return value
        text = str(value).strip().lower()
        if text.startswith("cat"):
            text = text[3:]
        try:
            return cls(int(text))
        except (ValueError, KeyError) as exc:
            raise InvalidValueError(f"unknown sign category: {value!r}") from exc


_CATEGORY_DESCRIPTIONS = {
    SignCategory.CAT1: "Number < 10",
    SignCategory.CAT2: "Number > 10",
    SignCategory.CAT3: "Alphabet Letter",
    SignCategory.CAT4: "Word by a Sign",
    SignCategory.CAT5: "Word by Letters",
    SignCategory.CAT6: "Sentence by Words",
    SignCategory.CAT7: "Sentence by Signs",
    SignCategory.CAT8: "Arbitrary Sentence",
}


@dataclass(frozen=True)
class Language:
    id: int
    name: str


@dataclass(frozen=True)
class SignItem:
    id: int
    name: str
    language_id: int
    category: SignCategory


@dataclass(frozen=True)
class Performer:
    id: int
    name: str
    age: int
    phone: str = ""


@dataclass(frozen=True)
class RecordingEntry:
    id: int
    folder_path: str
    performer_id: int
    item_id: int
    frame_count: int


@dataclass(frozen=True)
class CategoryStats:
    """Item and recording counts per category, driving uniform collection."""

    defined_items: dict[SignCategory, int]
    recordings: dict[SignCategory, int]

    def as_rows(self) -> list[dict]:
        return [
            {
                "category": cat.label,
                "description": cat.description,
                "defined_item_count": self.defined_items[cat],
                "recording_count": self.recordings[cat],
            }
            for cat in SignCategory
        ]


_SCHEMA = """
CREATE TABLE options (
    key   TEXT PRIMARY KEY,
    value TEXT NOT NULL
);
CREATE TABLE languages (
    id   INTEGER PRIMARY KEY AUTOINCREMENT,
    name TEXT NOT NULL COLLATE NOCASE UNIQUE
);
CREATE TABLE items (
    id          INTEGER PRIMARY KEY AUTOINCREMENT,
    name        TEXT NOT NULL,
    language_id INTEGER NOT NULL REFERENCES languages(id),
    category    INTEGER NOT NULL CHECK (category BETWEEN 1 AND 8),
    UNIQUE (name, language_id)
);
CREATE TABLE performers (
    id    INTEGER PRIMARY KEY AUTOINCREMENT,
    name  TEXT NOT NULL,
    age   INTEGER NOT NULL CHECK (age > 0 AND age <= 130),
    phone TEXT NOT NULL DEFAULT ''
);
CREATE TABLE recordings (
    id           INTEGER PRIMARY KEY AUTOINCREMENT,
    folder_path  TEXT NOT NULL UNIQUE,
    performer_id INTEGER NOT NULL REFERENCES performers(id),
    item_id      INTEGER NOT NULL REFERENCES items(id),
    frame_count  INTEGER NOT NULL
);
"""


class Catalog:
    """Handle to one catalog database file."""

    def __init__(self, path: str | Path):
        self._path = Path(path)
        self._lock = threading.RLock()
        self._conn = sqlite3.connect(str(self._path), check_same_thread=False)
        self._conn.execute("PRAGMA foreign_keys = ON")
        self._migrate()

    def _migrate(self):
        with self._lock:
            version = self._conn.execute("PRAGMA user_version").fetchone()[0]
            if version == 0:
                self._conn.executescript(_SCHEMA)
                self._conn.execute(f"PRAGMA user_version = {SCHEMA_VERSION}")
                self._conn.commit()
            elif version != SCHEMA_VERSION:
                raise CatalogError(f"unsupported schema version {version}")

    def close(self):
        self._conn.close()

    def __enter__(self) -> "Catalog":
        return self

    def __exit__(self, *exc):
        self.close()

    @property
    def path(self) -> Path:
        return self._path

    # -- definitions ---------------------------------------------------------

    def define_language(self, name: str) -> Language:
        name = name.strip()
        if not name:
            raise InvalidValueError("language name must be non-empty")
        with self._lock:
            try:
                cur = self._conn.execute("INSERT INTO languages (name) VALUES (?)", (name,))
                self._conn.commit()
            except sqlite3.IntegrityError as exc:
                raise DuplicateError(f"language {name!r} already defined") from exc
            return Language(cur.lastrowid, name)

    def define_item(self, name: str, category: SignCategory, language_id: int) -> SignItem:
        name = name.strip()
        if not name:
            raise InvalidValueError("item name must be non-empty")
        category = SignCategory.parse(category)
        with self._lock:
            if self.get_language(language_id) is None:
                raise MissingReferenceError(f"language id {language_id} does not exist")
            try:
                cur = self._conn.execute(
                    "INSERT INTO items (name, language_id, category) VALUES (?, ?, ?)",
                    (name, language_id, category.value),
                )
                self._conn.commit()
            except sqlite3.IntegrityError as exc:
                raise DuplicateError(
                    f"item {name!r} already defined for language {language_id}"
                ) from exc
            return SignItem(cur.lastrowid, name, language_id, category)

    def define_performer(self, name: str, age: int, phone: str = "") -> Performer:
        name = name.strip()
        if not name:
            raise InvalidValueError("performer name must be non-empty")
        if not isinstance(age, int) or not 0 < age <= 130:
            raise InvalidValueError(f"performer age out of range: {age}")
        with self._lock:
            cur = self._conn.execute(
                "INSERT INTO performers (name, age, phone) VALUES (?, ?, ?)", (name, age, phone)
            )
            self._conn.commit()
            return Performer(cur.lastrowid, name, age, phone)

    def register_recording(
        self, folder_path: str | Path, item_id: int, performer_id: int, frame_count: int
    ) -> RecordingEntry:
        folder_path = str(folder_path)
        if frame_count < 0:
            raise InvalidValueError("frame_count must be non-negative")
        with self._lock:
            if self.get_item(item_id) is None:
                raise MissingReferenceError(f"item id {item_id} does not exist")
            if self.get_performer(performer_id) is None:
                raise MissingReferenceError(f"performer id {performer_id} does not exist")
            try:
                cur = self._conn.execute(
                    "INSERT INTO recordings (folder_path, performer_id, item_id, frame_count)"
                    " VALUES (?, ?, ?, ?)",
                    (folder_path, performer_id, item_id, frame_count),
                )
                self._conn.commit()
            except sqlite3.IntegrityError as exc:
                raise DuplicateError(f"folder {folder_path!r} already registered") from exc
            return RecordingEntry(cur.lastrowid, folder_path, performer_id, item_id, frame_count)

    # -- deletion (restrict semantics) ---------------------------------------

    def _delete(self, table: str, row_id: int):
        with self._lock:
            try:
                cur = self._conn.execute(f"DELETE FROM {table} WHERE id = ?", (row_id,))
                self._conn.commit()
            except sqlite3.IntegrityError as exc:
                raise DeletionRestrictedError(
                    f"{table} id {row_id} has dependent rows"
                ) from exc
            if cur.rowcount == 0:
                raise MissingReferenceError(f"{table} id {row_id} does not exist")

    def delete_language(self, language_id: int):
        self._delete("languages", language_id)

    def delete_item(self, item_id: int):
        self._delete("items", item_id)

    def delete_performer(self, performer_id: int):
        self._delete("performers", performer_id)

    # -- lookups ---------------------------------------------------------------

    def get_language(self, language_id: int) -> Language | None:
        row = self._conn.execute(
            "SELECT id, name FROM languages WHERE id = ?", (language_id,)
        ).fetchone()
        return Language(*row) if row else None

    def get_item(self, item_id: int) -> SignItem | None:
        row = self._conn.execute(
            "SELECT id, name, language_id, category FROM items WHERE id = ?", (item_id,)
        ).fetchone()
        return SignItem(row[0], row[1], row[2], SignCategory(row[3])) if row else None

    def get_performer(self, performer_id: int) -> Performer | None:
        row = self._conn.execute(
            "SELECT id, name, age, phone FROM performers WHERE id = ?", (performer_id,)
        ).fetchone()
        return Performer(*row) if row else None

    def languages(self) -> list[Language]:
        rows = self._conn.execute("SELECT id, name FROM languages ORDER BY id").fetchall()
        return [Language(*r) for r in rows]

    def performers(self) -> list[Performer]:
        rows = self._conn.execute(
            "SELECT id, name, age, phone FROM performers ORDER BY id"
        ).fetchall()
        return [Performer(*r) for r in rows]

    def recordings(self) -> list[RecordingEntry]:
        rows = self._conn.execute(
            "SELECT id, folder_path, performer_id, item_id, frame_count"
            " FROM recordings ORDER BY id"
        ).fetchall()
        return [RecordingEntry(*r) for r in rows]

    def items(self) -> list[SignItem]:
        rows = self._conn.execute(
            "SELECT id, name, language_id, category FROM items ORDER BY id"
        ).fetchall()
        return [SignItem(r[0], r[1], r[2], SignCategory(r[3])) for r in rows]

    def list_items(
        self, category: SignCategory, search: str = ""
    ) -> list[tuple[SignItem, int]]:
        """Items of one category matching ``search`` case-insensitively, with recording counts, by name."""
        category = SignCategory.parse(category)
        rows = self._conn.execute(
            "SELECT i.id, i.name, i.language_id, i.category, COUNT(r.id)"
            " FROM items i LEFT JOIN recordings r ON r.item_id = i.id"
            " WHERE i.category = ? GROUP BY i.id",
            (category.value,),
        ).fetchall()
        needle = search.lower()
        matched = [
            (SignItem(r[0], r[1], r[2], SignCategory(r[3])), r[4])
            for r in rows
            if needle in r[1].lower()
        ]
        return sorted(matched, key=lambda pair: pair[0].name)

    # -- statistics -------------------------------------------------------------

    def category_stats(self) -> CategoryStats:
        defined = {cat: 0 for cat in SignCategory}
        recorded = {cat: 0 for cat in SignCategory}
        for cat, count in self._conn.execute(
            "SELECT category, COUNT(*) FROM items GROUP BY category"
        ):
            defined[SignCategory(cat)] = count
        for cat, count in self._conn.execute(
            "SELECT i.category, COUNT(*) FROM recordings r"
            " JOIN items i ON i.id = r.item_id GROUP BY i.category"
        ):
            recorded[SignCategory(cat)] = count
        return CategoryStats(defined_items=defined, recordings=recorded)

    # -- options ------------------------------------------------------------------

    def get_option(self, key: str, default: str | None = None) -> str | None:
        row = self._conn.execute("SELECT value FROM options WHERE key = ?", (key,)).fetchone()
        return row[0] if row else default

    def set_option(self, key: str, value: str):
        with self._lock:
            self._conn.execute(
                "INSERT INTO options (key, value) VALUES (?, ?)"
                " ON CONFLICT(key) DO UPDATE SET value = excluded.value",
                (key, value),
            )
            self._conn.commit()
