__version__ = "0.1.0"

from .baer import Folder, baer_envelope, folder_to_loop, make_folder, verify_folder
from .bx2p import LemmaReport, check_theorem1_shape, classify_folder, classify_q, heiss_decomposition
from .formats import read_folder, read_group, read_loop
from .lemmas import lemma_suite
from .loopcore import Loop, validate_loop
from .permcore import Perm, PermGroup
