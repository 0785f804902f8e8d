"""Durable card and draft storage: one JSON file per record under a data
directory, written atomically (temp file + rename) so an interrupted write
leaves either the old or the new version on disk, never a torn record.

Writes are serialized per record id; reads go straight to the latest
committed file, so concurrent requests are safe without a global lock.
"""

from __future__ import annotations

import os
import threading
from contextlib import contextmanager
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Union

from .errors import (
    DuplicateIdError,
    ModelError,
    NotFoundError,
    StorageError,
    VersionConflictError,
)
from .model import (
    IdiomType,
    IndicatorSpecificationCard,
    TaskType,
    new_id,
    now_stamp,
    parse_card,
    parse_stamp,
    serialize_card,
)
from .workflow import Draft, parse_draft, serialize_draft

COPY_SUFFIX = " (copy)"


@dataclass(frozen=True)
class CardSummary:
    id: str
    name: str
    idiom: IdiomType
    task: Optional[TaskType]
    updated_at: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "idiom": self.idiom.value,
            "task": self.task.value if self.task else None,
            "updated_at": self.updated_at,
        }


class CardStore:
    def __init__(self, data_dir: Union[str, Path]):
        self.data_dir = Path(data_dir)
        self.cards_dir = self.data_dir / "cards"
        self.drafts_dir = self.data_dir / "drafts"
        try:
            self.cards_dir.mkdir(parents=True, exist_ok=True)
            self.drafts_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create data directory {self.data_dir}: {exc}") from None
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._sweep_temp_files()

    # -- locking ------------------------------------------------------------

    def _lock_for(self, key: str) -> threading.Lock:
        with self._locks_guard:
            lock = self._locks.get(key)
            if lock is None:
                lock = threading.Lock()
                self._locks[key] = lock
            return lock

    @contextmanager
    def card_lock(self, card_id: str):
        with self._lock_for(f"card:{card_id}"):
            yield

    @contextmanager
    def draft_lock(self, draft_id: str):
        """Single-writer contract for a draft: step applications serialize here."""
        with self._lock_for(f"draft:{draft_id}"):
            yield

    # -- low-level io -------------------------------------------------------

    def _sweep_temp_files(self) -> None:
        for folder in (self.cards_dir, self.drafts_dir):
            for leftover in folder.glob("*.tmp-*"):
                try:
                    leftover.unlink()
                except OSError:
                    pass

    def _atomic_write(self, path: Path, text: str) -> None:
        tmp = path.with_name(f"{path.name}.tmp-{new_id()[:8]}")
        try:
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write(text)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
            dir_fd = os.open(path.parent, os.O_RDONLY)
            try:
                os.fsync(dir_fd)
            finally:
                os.close(dir_fd)
        except OSError as exc:
            try:
                tmp.unlink()
            except OSError:
                pass
            raise StorageError(f"cannot write {path}: {exc}") from None

    def _card_path(self, card_id: str) -> Path:
        return self.cards_dir / f"{card_id}.json"

    def _draft_path(self, draft_id: str) -> Path:
        return self.drafts_dir / f"{draft_id}.json"

    # -- cards --------------------------------------------------------------

    def save_card(self, card: IndicatorSpecificationCard) -> IndicatorSpecificationCard:
        """Create a new record; versions always start at 1 in this store."""
        stored = card if card.version == 1 else replace(card, version=1)
        with self.card_lock(stored.id):
            path = self._card_path(stored.id)
            if path.exists():
                raise DuplicateIdError(f"card '{stored.id}' already exists")
            self._atomic_write(path, serialize_card(stored))
        return stored

    def get_card(self, card_id: str) -> IndicatorSpecificationCard:
        path = self._card_path(card_id)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise NotFoundError(f"card '{card_id}' not found") from None
        except OSError as exc:
            raise StorageError(f"cannot read {path}: {exc}") from None
        try:
            return parse_card(text)
        except ModelError as exc:
            raise StorageError(f"stored card {path} is corrupt: {exc}") from None

    def list_cards(self) -> list[CardSummary]:
        """Summaries sorted by updated_at descending, id ascending on ties."""
        summaries = []
        for path in self.cards_dir.glob("*.json"):
            card = self.get_card(path.stem)
            summaries.append(
                CardSummary(
                    id=card.id,
                    name=card.name,
                    idiom=card.idiom,
                    task=card.task,
                    updated_at=card.updated_at,
                )
            )
        summaries.sort(key=lambda s: (-parse_stamp(s.updated_at).timestamp(), s.id))
        return summaries

    def update_card(
        self,
        card_id: str,
        content: IndicatorSpecificationCard,
        expected_version: int,
    ) -> IndicatorSpecificationCard:
        """Replace a card's payload under optimistic concurrency: the write
        happens only when expected_version matches the stored version."""
        with self.card_lock(card_id):
            stored = self.get_card(card_id)
            if expected_version != stored.version:
                raise VersionConflictError(
                    f"version conflict: expected {expected_version}, "
                    f"stored is {stored.version}",
                    current_version=stored.version,
                )
            updated = replace(
                content,
                id=stored.id,
                created_at=stored.created_at,
                updated_at=now_stamp(),
                version=stored.version + 1,
            )
            self._atomic_write(self._card_path(card_id), serialize_card(updated))
            return updated

    def duplicate_card(self, card_id: str) -> IndicatorSpecificationCard:
        source = self.get_card(card_id)
        now = now_stamp()
        copy = replace(
            source,
            id=new_id(),
            name=source.name + COPY_SUFFIX,
            created_at=now,
            updated_at=now,
            version=1,
        )
        with self.card_lock(copy.id):
            self._atomic_write(self._card_path(copy.id), serialize_card(copy))
        return copy

    def delete_card(self, card_id: str) -> None:
        """Idempotent: deleting an absent card succeeds."""
        with self.card_lock(card_id):
            try:
                self._card_path(card_id).unlink()
            except FileNotFoundError:
                pass
            except OSError as exc:
                raise StorageError(f"cannot delete card '{card_id}': {exc}") from None

    # -- drafts -------------------------------------------------------------

    def save_draft(self, draft: Draft) -> Draft:
        self._atomic_write(self._draft_path(draft.id), serialize_draft(draft))
        return draft

    def get_draft(self, draft_id: str) -> Draft:
        path = self._draft_path(draft_id)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise NotFoundError(f"draft '{draft_id}' not found") from None
        except OSError as exc:
            raise StorageError(f"cannot read {path}: {exc}") from None
        try:
            return parse_draft(text)
        except ModelError as exc:
            raise StorageError(f"stored draft {path} is corrupt: {exc}") from None

    def delete_draft(self, draft_id: str) -> None:
        with self.draft_lock(draft_id):
            try:
                self._draft_path(draft_id).unlink()
            except FileNotFoundError:
                pass
            except OSError as exc:
                raise StorageError(f"cannot delete draft '{draft_id}': {exc}") from None
