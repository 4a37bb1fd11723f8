"""Durable, duplicate-free persistence for graph records and accounts.

Backed by a single-file embedded relational store (sqlite3 from the standard
library, keeping the dependency count at zero). All mutations serialize
through one lock; reads share the same connection. Graphs are stored once,
canonically relabelled, keyed by their canonical graph6 text.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import secrets
import sqlite3
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from . import canon as canon_mod
from . import invariants
from .canon import CanonicalKey, Canonicalizer
from .graphs import Graph, complement, from_graph6, line_graph, spring_layout
from .graphs import OrderOutOfRange  # re-exported for callers
from .invariants import InvariantValue, Status

ANONYMOUS_USER_ID = 1
ANONYMOUS_LOGIN = "anonymous"
ACTIVE_PASSWORD_SCHEME = "scrypt-v1"
_SCRYPT_PARAMS = dict(n=16384, r=8, p=1)

DUMP_HEADER = "%graphhaus-dump 1"


class StoreError(Exception):
    pass


class NotFound(StoreError):
    pass


class Unauthenticated(StoreError):
    pass


class MissingComment(StoreError):
    pass


class PositionCountMismatch(StoreError):
    pass


class InvalidPosition(StoreError):
    pass


class CannotDeleteAnonymous(StoreError):
    pass


class NameTaken(StoreError):
    pass


class CorruptArchive(StoreError):
    pass


class InvalidMetaList(StoreError):
    pass


class LoginOutcome(str, Enum):
    OK = "ok"
    BAD_CREDENTIALS = "bad_credentials"
    RESET_REQUIRED = "reset_required"
    DISABLED = "disabled"


@dataclass(frozen=True)
class LoginResult:
    outcome: LoginOutcome
    user_id: Optional[int] = None


@dataclass(frozen=True)
class Comment:
    author: str
    created_at: str
    body: str


@dataclass(frozen=True)
class StoredEmbedding:
    author: str
    positions: Tuple[Tuple[float, float], ...]


@dataclass
class GraphRecord:
    id: int
    canonical_key: CanonicalKey
    graph: Graph
    name: Optional[str]
    uploader: str
    comments: List[Comment]
    embeddings: List[StoredEmbedding]
    interesting_marks: Set[str]
    invariant_values: Dict[str, InvariantValue]
    related: Dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class MetaEntry:
    order: int
    count: Optional[int] = None  # None renders as unknown
    file_ref: Optional[str] = None


@dataclass
class MetaList:
    family: str
    description: str = ""
    entries: List[MetaEntry] = field(default_factory=list)
    generator_url: Optional[str] = None


@dataclass(frozen=True)
class InsertResult:
    status: str  # "inserted" | "duplicate"
    graph_id: int

    @property
    def inserted(self) -> bool:
        return self.status == "inserted"


_SCHEMA = """
CREATE TABLE IF NOT EXISTS meta_kv (key TEXT PRIMARY KEY, value TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS users (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    login TEXT UNIQUE NOT NULL,
    email TEXT NOT NULL DEFAULT '',
    password_digest TEXT NOT NULL,
    password_scheme TEXT NOT NULL,
    disabled INTEGER NOT NULL DEFAULT 0,
    force_password_reset INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS reset_tokens (
    user_id INTEGER PRIMARY KEY REFERENCES users(id),
    token TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS graphs (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    canonical_key TEXT UNIQUE NOT NULL,
    algorithm_version INTEGER NOT NULL,
    graph_order INTEGER NOT NULL,
    name TEXT,
    uploader_id INTEGER NOT NULL REFERENCES users(id)
);
CREATE INDEX IF NOT EXISTS idx_graphs_order ON graphs(graph_order, id);
CREATE TABLE IF NOT EXISTS comments (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    graph_id INTEGER NOT NULL REFERENCES graphs(id),
    author_id INTEGER NOT NULL REFERENCES users(id),
    created_at TEXT NOT NULL,
    body TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS embeddings (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    graph_id INTEGER NOT NULL REFERENCES graphs(id),
    author_id INTEGER NOT NULL REFERENCES users(id),
    positions TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS interesting_marks (
    graph_id INTEGER NOT NULL REFERENCES graphs(id),
    invariant_id TEXT NOT NULL,
    PRIMARY KEY (graph_id, invariant_id)
);
CREATE TABLE IF NOT EXISTS invariant_values (
    graph_id INTEGER NOT NULL REFERENCES graphs(id),
    invariant_id TEXT NOT NULL,
    status TEXT NOT NULL,
    value TEXT,
    num_value REAL,
    int_value INTEGER,
    computed_at TEXT,
    engine_version TEXT NOT NULL DEFAULT '',
    PRIMARY KEY (graph_id, invariant_id)
);
CREATE INDEX IF NOT EXISTS idx_values_inv ON invariant_values(invariant_id, status);
CREATE TABLE IF NOT EXISTS meta_lists (
    family TEXT PRIMARY KEY,
    description TEXT NOT NULL DEFAULT '',
    generator_url TEXT
);
CREATE TABLE IF NOT EXISTS meta_entries (
    family TEXT NOT NULL REFERENCES meta_lists(family),
    graph_order INTEGER NOT NULL,
    count INTEGER,
    file_ref TEXT,
    PRIMARY KEY (family, graph_order)
);
"""


def _value_to_text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction) and value.denominator != 1:
        return f"{value.numerator}/{value.denominator}"
    return str(int(value))


def _value_from_text(text: Optional[str]):
    if text is None:
        return None
    if text == "true":
        return True
    if text == "false":
        return False
    if "/" in text:
        return Fraction(text)
    return int(text)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class Store:
    """Single-writer, multi-reader graph store."""

    def __init__(self, path: Union[str, Path] = ":memory:", canonicalizer: Optional[Canonicalizer] = None):
        self.path = str(path)
        self.canonicalizer = canonicalizer or Canonicalizer()
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._lock = threading.RLock()
        with self._lock, self._conn:
            self._conn.executescript(_SCHEMA)
            self._conn.execute(
                "INSERT OR REPLACE INTO meta_kv (key, value) VALUES ('algorithm_version', ?)",
                (str(self.canonicalizer.algorithm_version),),
            )
            row = self._conn.execute("SELECT id FROM users WHERE id = ?", (ANONYMOUS_USER_ID,)).fetchone()
            if row is None:
                # reserved account: owns anonymized content, can never log in
                self._conn.execute(
                    "INSERT INTO users (id, login, email, password_digest, password_scheme, disabled)"
                    " VALUES (?, ?, '', '', 'none', 1)",
                    (ANONYMOUS_USER_ID, ANONYMOUS_LOGIN),
                )

    def close(self) -> None:
        self._conn.close()

    # -- accounts ----------------------------------------------------------

    @staticmethod
    def _digest(password: str, salt: str) -> str:
        raw = hashlib.scrypt(password.encode(), salt=bytes.fromhex(salt), **_SCRYPT_PARAMS)
        return raw.hex()

    def create_user(self, login: str, password: str, email: str = "") -> int:
        if not login or not password:
            raise StoreError("login and password are required")
        salt = secrets.token_bytes(16).hex()
        digest = f"{salt}${self._digest(password, salt)}"
        with self._lock, self._conn:
            try:
                cur = self._conn.execute(
                    "INSERT INTO users (login, email, password_digest, password_scheme)"
                    " VALUES (?, ?, ?, ?)",
                    (login, email, digest, ACTIVE_PASSWORD_SCHEME),
                )
            except sqlite3.IntegrityError:
                raise NameTaken(login) from None
            return cur.lastrowid

    def verify_login(self, login: str, password: str) -> LoginResult:
        with self._lock:
            row = self._conn.execute(
                "SELECT id, password_digest, password_scheme, disabled, force_password_reset"
                " FROM users WHERE login = ?",
                (login,),
            ).fetchone()
        if row is None:
            return LoginResult(LoginOutcome.BAD_CREDENTIALS)
        user_id, digest, scheme, disabled, force_reset = row
        if scheme != ACTIVE_PASSWORD_SCHEME or force_reset:
            return LoginResult(LoginOutcome.RESET_REQUIRED, user_id)
        if disabled:
            return LoginResult(LoginOutcome.DISABLED, user_id)
        salt, want = digest.split("$", 1)
        if hmac.compare_digest(self._digest(password, salt), want):
            return LoginResult(LoginOutcome.OK, user_id)
        return LoginResult(LoginOutcome.BAD_CREDENTIALS)

    def mark_legacy_scheme(self, login: str, scheme: str = "md5-legacy") -> None:
        """Tag an account as using a retired hash: blocks login, forces a reset."""
        with self._lock, self._conn:
            cur = self._conn.execute(
                "UPDATE users SET password_scheme = ?, force_password_reset = 1 WHERE login = ?",
                (scheme, login),
            )
            if cur.rowcount == 0:
                raise NotFound(login)

    def begin_password_reset(self, login: str) -> str:
        """Issue a reset token. Delivery is stubbed: the token is returned."""
        user_id = self._user_id(login)
        if user_id == ANONYMOUS_USER_ID:
            raise Unauthenticated("anonymous account has no password")
        token = secrets.token_hex(16)
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO reset_tokens (user_id, token) VALUES (?, ?)",
                (user_id, token),
            )
        return token

    def complete_password_reset(self, login: str, token: str, new_password: str) -> None:
        user_id = self._user_id(login)
        with self._lock, self._conn:
            row = self._conn.execute(
                "SELECT token FROM reset_tokens WHERE user_id = ?", (user_id,)
            ).fetchone()
            if row is None or not hmac.compare_digest(row[0], token):
                raise Unauthenticated("invalid reset token")
            salt = secrets.token_bytes(16).hex()
            digest = f"{salt}${self._digest(new_password, salt)}"
            self._conn.execute(
                "UPDATE users SET password_digest = ?, password_scheme = ?,"
                " force_password_reset = 0, disabled = 0 WHERE id = ?",
                (digest, ACTIVE_PASSWORD_SCHEME, user_id),
            )
            self._conn.execute("DELETE FROM reset_tokens WHERE user_id = ?", (user_id,))

    def delete_user(self, user_id: int) -> None:
        """Re-own all content to the anonymous account, then drop the account."""
        if user_id == ANONYMOUS_USER_ID:
            raise CannotDeleteAnonymous()
        with self._lock, self._conn:
            row = self._conn.execute("SELECT id FROM users WHERE id = ?", (user_id,)).fetchone()
            if row is None:
                raise NotFound(f"user {user_id}")
            for table, column in (
                ("graphs", "uploader_id"),
                ("comments", "author_id"),
                ("embeddings", "author_id"),
            ):
                self._conn.execute(
                    f"UPDATE {table} SET {column} = ? WHERE {column} = ?",
                    (ANONYMOUS_USER_ID, user_id),
                )
            self._conn.execute("DELETE FROM reset_tokens WHERE user_id = ?", (user_id,))
            self._conn.execute("DELETE FROM users WHERE id = ?", (user_id,))

    def _user_id(self, login: str) -> int:
        row = self._conn.execute("SELECT id FROM users WHERE login = ?", (login,)).fetchone()
        if row is None:
            raise NotFound(login)
        return row[0]

    def resolve_account(self, account: Union[int, str]) -> Tuple[int, str]:
        """Registered, enabled account or Unauthenticated."""
        with self._lock:
            if isinstance(account, int):
                row = self._conn.execute(
                    "SELECT id, login, disabled FROM users WHERE id = ?", (account,)
                ).fetchone()
            else:
                row = self._conn.execute(
                    "SELECT id, login, disabled FROM users WHERE login = ?", (account,)
                ).fetchone()
        if row is None or row[2]:
            raise Unauthenticated(f"no enabled account {account!r}")
        return row[0], row[1]

    # -- graph records -----------------------------------------------------

    def find_graph_by_key(self, key_text: str) -> Optional[int]:
        with self._lock:
            row = self._conn.execute(
                "SELECT id FROM graphs WHERE canonical_key = ?", (key_text,)
            ).fetchone()
        return None if row is None else row[0]

    def insert_graph(
        self,
        g: Graph,
        uploader: Union[int, str],
        comment: str,
        name: Optional[str] = None,
        interesting_marks: Sequence[str] = (),
        graph_id: Optional[int] = None,
        precomputed_key: Optional[CanonicalKey] = None,
    ) -> InsertResult:
        uploader_id, _ = self.resolve_account(uploader)
        if not comment or comment.isspace():
            raise MissingComment("a reason why the graph is interesting is required")
        for mark in interesting_marks:
            invariants.descriptor(mark)
        key = precomputed_key or self.canonicalizer.canonical_key(g)
        canonical_graph = key.decode()
        with self._lock, self._conn:
            row = self._conn.execute(
                "SELECT id FROM graphs WHERE canonical_key = ?", (key.key,)
            ).fetchone()
            if row is not None:
                return InsertResult("duplicate", row[0])
            if graph_id is None:
                cur = self._conn.execute(
                    "INSERT INTO graphs (canonical_key, algorithm_version, graph_order, name, uploader_id)"
                    " VALUES (?, ?, ?, ?, ?)",
                    (key.key, key.algorithm_version, g.order, name, uploader_id),
                )
                graph_id = cur.lastrowid
            else:
                self._conn.execute(
                    "INSERT INTO graphs (id, canonical_key, algorithm_version, graph_order, name, uploader_id)"
                    " VALUES (?, ?, ?, ?, ?, ?)",
                    (graph_id, key.key, key.algorithm_version, g.order, name, uploader_id),
                )
            self._conn.execute(
                "INSERT INTO comments (graph_id, author_id, created_at, body) VALUES (?, ?, ?, ?)",
                (graph_id, uploader_id, _now(), comment),
            )
            layout = spring_layout(canonical_graph, iterations=60, seed=0)
            self._conn.execute(
                "INSERT INTO embeddings (graph_id, author_id, positions) VALUES (?, ?, ?)",
                (graph_id, uploader_id, _positions_to_json(layout.positions)),
            )
            for mark in set(interesting_marks):
                self._conn.execute(
                    "INSERT OR IGNORE INTO interesting_marks (graph_id, invariant_id) VALUES (?, ?)",
                    (graph_id, mark),
                )
            for desc in invariants.registry():
                self._conn.execute(
                    "INSERT INTO invariant_values (graph_id, invariant_id, status) VALUES (?, ?, ?)",
                    (graph_id, desc.id, Status.PENDING.value),
                )
        return InsertResult("inserted", graph_id)

    def get_record(self, graph_id: int) -> GraphRecord:
        with self._lock:
            row = self._conn.execute(
                "SELECT g.canonical_key, g.algorithm_version, g.name, u.login"
                " FROM graphs g JOIN users u ON u.id = g.uploader_id WHERE g.id = ?",
                (graph_id,),
            ).fetchone()
            if row is None:
                raise NotFound(f"graph {graph_id}")
            key_text, version, name, uploader = row
            comments = [
                Comment(author, created, body)
                for author, created, body in self._conn.execute(
                    "SELECT u.login, c.created_at, c.body FROM comments c"
                    " JOIN users u ON u.id = c.author_id WHERE c.graph_id = ? ORDER BY c.id",
                    (graph_id,),
                )
            ]
            embeddings = [
                StoredEmbedding(author, _positions_from_json(positions))
                for author, positions in self._conn.execute(
                    "SELECT u.login, e.positions FROM embeddings e"
                    " JOIN users u ON u.id = e.author_id WHERE e.graph_id = ? ORDER BY e.id",
                    (graph_id,),
                )
            ]
            marks = {
                inv
                for (inv,) in self._conn.execute(
                    "SELECT invariant_id FROM interesting_marks WHERE graph_id = ?", (graph_id,)
                )
            }
        graph = from_graph6(key_text)
        return GraphRecord(
            id=graph_id,
            canonical_key=CanonicalKey(key_text, version),
            graph=graph,
            name=name,
            uploader=uploader,
            comments=comments,
            embeddings=embeddings,
            interesting_marks=marks,
            invariant_values=self.invariant_values(graph_id),
            related=self._related_ids(graph, graph_id),
        )

    def _related_ids(self, g: Graph, self_id: int) -> Dict[str, int]:
        related = {}
        comp_key = self.canonicalizer.canonical_key(complement(g)).key
        row = self._conn.execute("SELECT id FROM graphs WHERE canonical_key = ?", (comp_key,)).fetchone()
        if row is not None:
            related["complement"] = row[0]
        if 1 <= g.num_edges() <= 250:
            lg_key = self.canonicalizer.canonical_key(line_graph(g)).key
            row = self._conn.execute("SELECT id FROM graphs WHERE canonical_key = ?", (lg_key,)).fetchone()
            if row is not None:
                related["line_graph"] = row[0]
        return related

    def add_comment(self, graph_id: int, author: Union[int, str], body: str) -> None:
        author_id, _ = self.resolve_account(author)
        if not body or body.isspace():
            raise MissingComment("comment body must not be blank")
        with self._lock, self._conn:
            self._require_graph(graph_id)
            self._conn.execute(
                "INSERT INTO comments (graph_id, author_id, created_at, body) VALUES (?, ?, ?, ?)",
                (graph_id, author_id, _now(), body),
            )

    def add_embedding(self, graph_id: int, author: Union[int, str], positions: Sequence[Tuple[float, float]]) -> None:
        author_id, _ = self.resolve_account(author)
        with self._lock, self._conn:
            order = self._require_graph(graph_id)
            if len(positions) != order:
                raise PositionCountMismatch(f"expected {order} positions, got {len(positions)}")
            for x, y in positions:
                if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
                    raise InvalidPosition(f"({x}, {y}) outside the unit square")
            self._conn.execute(
                "INSERT INTO embeddings (graph_id, author_id, positions) VALUES (?, ?, ?)",
                (graph_id, author_id, _positions_to_json(positions)),
            )

    def mark_interesting(self, graph_id: int, author: Union[int, str], invariant_id: str) -> None:
        self.resolve_account(author)
        invariants.descriptor(invariant_id)
        with self._lock, self._conn:
            self._require_graph(graph_id)
            self._conn.execute(
                "INSERT OR IGNORE INTO interesting_marks (graph_id, invariant_id) VALUES (?, ?)",
                (graph_id, invariant_id),
            )

    def _require_graph(self, graph_id: int) -> int:
        row = self._conn.execute("SELECT graph_order FROM graphs WHERE id = ?", (graph_id,)).fetchone()
        if row is None:
            raise NotFound(f"graph {graph_id}")
        return row[0]

    # -- invariant values ----------------------------------------------------

    def set_invariant_value(self, graph_id: int, invariant_id: str, value: InvariantValue,
                            engine_version: str = "") -> None:
        num = int_v = text = None
        if value.status is Status.COMPUTED:
            text = _value_to_text(value.value)
            as_fraction = Fraction(value.value)
            num = float(as_fraction)
            if as_fraction.denominator == 1:
                int_v = int(as_fraction)
        with self._lock, self._conn:
            self._require_graph(graph_id)
            self._conn.execute(
                "INSERT OR REPLACE INTO invariant_values"
                " (graph_id, invariant_id, status, value, num_value, int_value, computed_at, engine_version)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
                (graph_id, invariant_id, value.status.value, text, num, int_v, _now(), engine_version),
            )

    def invariant_values(self, graph_id: int) -> Dict[str, InvariantValue]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT invariant_id, status, value FROM invariant_values WHERE graph_id = ?",
                (graph_id,),
            ).fetchall()
        return {
            inv: InvariantValue(Status(status), _value_from_text(text))
            for inv, status, text in rows
        }

    def pending_jobs(self, invariant_id: Optional[str] = None,
                     statuses: Tuple[Status, ...] = (Status.PENDING,)) -> List[Tuple[int, str]]:
        placeholders = ",".join("?" for _ in statuses)
        sql = (
            f"SELECT graph_id, invariant_id FROM invariant_values WHERE status IN ({placeholders})"
        )
        args: list = [s.value for s in statuses]
        if invariant_id is not None:
            sql += " AND invariant_id = ?"
            args.append(invariant_id)
        with self._lock:
            return list(self._conn.execute(sql + " ORDER BY graph_id, invariant_id", args))

    # -- search support (SearchableStore protocol) ---------------------------

    def graph_summaries(self) -> List[Tuple[int, int]]:
        with self._lock:
            return list(self._conn.execute("SELECT id, graph_order FROM graphs ORDER BY graph_order, id"))

    def _computed_values(self, invariant: str) -> Iterator[Tuple[int, str]]:
        with self._lock:
            yield from self._conn.execute(
                "SELECT graph_id, value FROM invariant_values WHERE invariant_id = ? AND status = 'computed'",
                (invariant,),
            )

    def match_range(self, invariant: str, lo: Optional[Fraction], hi: Optional[Fraction]) -> Set[int]:
        out = set()
        for gid, text in self._computed_values(invariant):
            v = Fraction(_value_from_text(text))
            if (lo is None or v >= lo) and (hi is None or v <= hi):
                out.add(gid)
        return out

    def match_exact(self, invariant: str, value: Fraction) -> Set[int]:
        return {
            gid
            for gid, text in self._computed_values(invariant)
            if Fraction(_value_from_text(text)) == value
        }

    def match_parity(self, invariant: str, parity: str) -> Set[int]:
        want = 1 if parity == "odd" else 0
        with self._lock:
            rows = self._conn.execute(
                "SELECT graph_id FROM invariant_values WHERE invariant_id = ? AND status = 'computed'"
                " AND int_value IS NOT NULL AND (int_value % 2) = ?",
                (invariant, want),
            ).fetchall()
        return {gid for (gid,) in rows}

    def match_boolean(self, invariant: str, include: bool) -> Set[int]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT graph_id FROM invariant_values WHERE invariant_id = ? AND status = 'computed'"
                " AND value = ?",
                (invariant, "true" if include else "false"),
            ).fetchall()
        return {gid for (gid,) in rows}

    def match_interesting(self, invariant: str) -> Set[int]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT graph_id FROM interesting_marks WHERE invariant_id = ?", (invariant,)
            ).fetchall()
        return {gid for (gid,) in rows}

    def match_text(self, text: str, scope: str) -> Set[int]:
        out: Set[int] = set()
        with self._lock:
            if scope in ("name", "both"):
                rows = self._conn.execute(
                    "SELECT id FROM graphs WHERE name IS NOT NULL AND instr(lower(name), lower(?)) > 0",
                    (text,),
                ).fetchall()
                out |= {gid for (gid,) in rows}
            if scope in ("comment", "both"):
                rows = self._conn.execute(
                    "SELECT DISTINCT graph_id FROM comments WHERE instr(lower(body), lower(?)) > 0",
                    (text,),
                ).fetchall()
                out |= {gid for (gid,) in rows}
        return out

    def graph_by_id(self, graph_id: int) -> Graph:
        with self._lock:
            row = self._conn.execute("SELECT canonical_key FROM graphs WHERE id = ?", (graph_id,)).fetchone()
        if row is None:
            raise NotFound(f"graph {graph_id}")
        return from_graph6(row[0])

    def graph_count(self) -> int:
        with self._lock:
            return self._conn.execute("SELECT count(*) FROM graphs").fetchone()[0]

    def iter_graphs(self) -> Iterator[Tuple[int, CanonicalKey, Graph]]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT id, canonical_key, algorithm_version FROM graphs ORDER BY id"
            ).fetchall()
        for gid, key, version in rows:
            yield gid, CanonicalKey(key, version), from_graph6(key)

    def audit_unique_keys(self) -> List[str]:
        """Full-scan re-check of the uniqueness invariant; empty when healthy."""
        with self._lock:
            rows = self._conn.execute(
                "SELECT canonical_key FROM graphs GROUP BY canonical_key HAVING count(*) > 1"
            ).fetchall()
        return [key for (key,) in rows]

    # -- meta-directory ------------------------------------------------------

    def upsert_meta_list(self, meta: MetaList) -> None:
        for entry in meta.entries:
            if entry.count is not None and entry.count < 0:
                raise InvalidMetaList(f"negative count for order {entry.order}")
            if entry.order < 1:
                raise InvalidMetaList(f"bad order {entry.order}")
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO meta_lists (family, description, generator_url) VALUES (?, ?, ?)",
                (meta.family, meta.description, meta.generator_url),
            )
            self._conn.execute("DELETE FROM meta_entries WHERE family = ?", (meta.family,))
            for entry in meta.entries:
                self._conn.execute(
                    "INSERT INTO meta_entries (family, graph_order, count, file_ref) VALUES (?, ?, ?, ?)",
                    (meta.family, entry.order, entry.count, entry.file_ref),
                )

    def get_meta_list(self, family: str) -> MetaList:
        with self._lock:
            row = self._conn.execute(
                "SELECT description, generator_url FROM meta_lists WHERE family = ?", (family,)
            ).fetchone()
            if row is None:
                raise NotFound(f"meta list {family}")
            entries = [
                MetaEntry(order, count, file_ref)
                for order, count, file_ref in self._conn.execute(
                    "SELECT graph_order, count, file_ref FROM meta_entries WHERE family = ?"
                    " ORDER BY graph_order",
                    (family,),
                )
            ]
        return MetaList(family, row[0], entries, row[1])

    def list_meta_families(self) -> List[str]:
        with self._lock:
            return [f for (f,) in self._conn.execute("SELECT family FROM meta_lists ORDER BY family")]

    # -- dump / restore ------------------------------------------------------

    def _table_rows(self, sql: str) -> List[list]:
        return [list(r) for r in self._conn.execute(sql)]

    def dump_bytes(self) -> bytes:
        """Deterministic logical dump of every table."""
        with self._lock:
            graphs = self._table_rows(
                "SELECT id, canonical_key, algorithm_version FROM graphs ORDER BY id"
            )
            metadata = {
                "algorithm_version": self.canonicalizer.algorithm_version,
                "users": self._table_rows(
                    "SELECT id, login, email, password_digest, password_scheme, disabled,"
                    " force_password_reset FROM users ORDER BY id"
                ),
                "graph_meta": self._table_rows(
                    "SELECT id, graph_order, name, uploader_id FROM graphs ORDER BY id"
                ),
                "comments": self._table_rows(
                    "SELECT id, graph_id, author_id, created_at, body FROM comments ORDER BY id"
                ),
                "embeddings": self._table_rows(
                    "SELECT id, graph_id, author_id, positions FROM embeddings ORDER BY id"
                ),
                "marks": self._table_rows(
                    "SELECT graph_id, invariant_id FROM interesting_marks ORDER BY graph_id, invariant_id"
                ),
                "values": self._table_rows(
                    "SELECT graph_id, invariant_id, status, value, computed_at, engine_version"
                    " FROM invariant_values ORDER BY graph_id, invariant_id"
                ),
                "meta_lists": self._table_rows(
                    "SELECT family, description, generator_url FROM meta_lists ORDER BY family"
                ),
                "meta_entries": self._table_rows(
                    "SELECT family, graph_order, count, file_ref FROM meta_entries"
                    " ORDER BY family, graph_order"
                ),
            }
        lines = [DUMP_HEADER, f"%algorithm-version {self.canonicalizer.algorithm_version}"]
        lines.append(f"%graphs {len(graphs)}")
        lines.extend(f"{gid} {key} {version}" for gid, key, version in graphs)
        lines.append("%metadata")
        lines.append(json.dumps(metadata, sort_keys=True, separators=(",", ":")))
        payload = ("\n".join(lines) + "\n").encode()
        checksum = hashlib.sha256(payload).hexdigest()
        return payload + f"%checksum sha256 {checksum}\n".encode()

    def dump(self, path: Union[str, Path]) -> None:
        Path(path).write_bytes(self.dump_bytes())

    @classmethod
    def restore(cls, archive: Union[str, Path], db_path: Union[str, Path] = ":memory:",
                canonicalizer: Optional[Canonicalizer] = None) -> "Store":
        """Rebuild a store from an archive; ids and statuses come back bit-for-bit."""
        data = Path(archive).read_bytes()
        marker = b"%checksum sha256 "
        idx = data.rfind(marker)
        if idx < 0:
            raise CorruptArchive("missing checksum")
        payload, checksum_line = data[:idx], data[idx:]
        stated = checksum_line[len(marker):].strip().decode(errors="replace")
        if hashlib.sha256(payload).hexdigest() != stated:
            raise CorruptArchive("checksum mismatch")
        lines = payload.decode().splitlines()
        if not lines or lines[0] != DUMP_HEADER:
            raise CorruptArchive("unrecognized archive header")
        try:
            graph_count = int(lines[2].split()[1])
            graph_lines = lines[3 : 3 + graph_count]
            assert lines[3 + graph_count] == "%metadata"
            metadata = json.loads(lines[4 + graph_count])
        except (IndexError, ValueError, AssertionError):
            raise CorruptArchive("malformed archive structure") from None

        store = cls(db_path, canonicalizer=canonicalizer)
        with store._lock, store._conn:
            store._conn.execute("DELETE FROM users")  # drop the seeded anonymous row
            store._conn.executemany(
                "INSERT INTO users (id, login, email, password_digest, password_scheme,"
                " disabled, force_password_reset) VALUES (?, ?, ?, ?, ?, ?, ?)",
                metadata["users"],
            )
            graph_meta = {row[0]: row for row in metadata["graph_meta"]}
            for line in graph_lines:
                gid_text, key, version = line.split()
                gid = int(gid_text)
                _, order, name, uploader_id = graph_meta[gid]
                store._conn.execute(
                    "INSERT INTO graphs (id, canonical_key, algorithm_version, graph_order,"
                    " name, uploader_id) VALUES (?, ?, ?, ?, ?, ?)",
                    (gid, key, int(version), order, name, uploader_id),
                )
            store._conn.executemany(
                "INSERT INTO comments (id, graph_id, author_id, created_at, body) VALUES (?, ?, ?, ?, ?)",
                metadata["comments"],
            )
            store._conn.executemany(
                "INSERT INTO embeddings (id, graph_id, author_id, positions) VALUES (?, ?, ?, ?)",
                metadata["embeddings"],
            )
            store._conn.executemany(
                "INSERT INTO interesting_marks (graph_id, invariant_id) VALUES (?, ?)",
                metadata["marks"],
            )
            for gid, inv, status, text, computed_at, engine in metadata["values"]:
                value = _value_from_text(text)
                num = int_v = None
                if value is not None and status == Status.COMPUTED.value:
                    as_fraction = Fraction(value)
                    num = float(as_fraction)
                    if as_fraction.denominator == 1:
                        int_v = int(as_fraction)
                store._conn.execute(
                    "INSERT INTO invariant_values (graph_id, invariant_id, status, value,"
                    " num_value, int_value, computed_at, engine_version) VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
                    (gid, inv, status, text, num, int_v, computed_at, engine),
                )
            store._conn.executemany(
                "INSERT INTO meta_lists (family, description, generator_url) VALUES (?, ?, ?)",
                metadata["meta_lists"],
            )
            store._conn.executemany(
                "INSERT INTO meta_entries (family, graph_order, count, file_ref) VALUES (?, ?, ?, ?)",
                metadata["meta_entries"],
            )
        return store


def _positions_to_json(positions: Sequence[Tuple[float, float]]) -> str:
    return json.dumps([[x, y] for x, y in positions], separators=(",", ":"))


def _positions_from_json(text: str) -> Tuple[Tuple[float, float], ...]:
    return tuple((x, y) for x, y in json.loads(text))
