import logging
import os
from typing import Tuple

logger = logging.getLogger(__name__)

EXTENSIONS = (".loop", ".group", ".folder")


class Corpus:
    """
    This class holds the bundled instance files, keyed by file name (c2.loop, d8.group, ...),
    and allows for adding instances from text
    """

    def __init__(self):
        self._instances = {}

    def _load_from_txt(self, path: str) -> str:
        with open(path, "r", encoding="utf-8") as fin:
            return fin.read()

    def _get_corpus_path(self) -> str:
        dir_path = os.path.dirname(os.path.realpath(__file__))
        return os.path.join(dir_path, "corpus")

    def get(self, name: str) -> str:
        """Fetches the text of a registered instance"""
        if name in self._instances:
            return self._instances[name]
        raise KeyError(f"Requested corpus instance '{name}' not found")

    def names(self, extension: str = "") -> Tuple[str, ...]:
        return tuple(sorted(name for name in self._instances if name.endswith(extension)))

    def add_from_path(self, name: str) -> None:
        """Adds a bundled instance by file name (the file must already exist)"""
        path = os.path.join(self._get_corpus_path(), name)
        if not os.path.exists(path):
            raise FileNotFoundError(f"Corpus path '{path}' does not exist")
        self._instances[name] = self._load_from_txt(path)

    def add_items(self, name: str, text: str) -> None:
        """Adds an instance directly from its file text"""
        self._instances[name] = text


corpus = Corpus()

for _name in sorted(os.listdir(corpus._get_corpus_path())):
    if _name.endswith(EXTENSIONS):
        corpus.add_from_path(_name)
logger.debug("corpus holds %d instances", len(corpus.names()))
