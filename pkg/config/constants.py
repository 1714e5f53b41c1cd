"""Application constants."""

# Graph ingestion
DEFAULT_NODE_TYPE = 'untyped'
COMMENT_PREFIX = '#'
FIELD_SEPARATOR = '\t'
RELATION_SEPARATOR = ','

# Time buckets for trajectory-derived relations (start hour inclusive, end hour exclusive)
DAY_INTERVALS = (
    ('midnight-to-morning', 0, 7),
    ('peak-morning', 7, 10),
    ('daytime', 10, 17),
    ('peak-evening', 17, 20),
    ('dusk-to-midnight', 20, 24),
)
WEEKDAY_SUFFIX = 'wd'
WEEKEND_SUFFIX = 'we'

# Numerical safety
SCORE_CLAMP = 30.0
CONVERGENCE_EPSILON = 1e-12

# Embedding export
TEXT_FLOAT_FORMAT = '.6g'
BINARY_HEADER_DTYPE = '<u8'
BINARY_ROW_DTYPE = '<f4'
VOCAB_SIDECAR_SUFFIX = '.vocab'

# Transform checkpoint format
TRANSFORM_MAGIC = b'HINETRF\x00'
TRANSFORM_FORMAT_VERSION = 1
CHECKPOINT_META_VERSION = 1
CHECKPOINT_EMBEDDINGS = 'embeddings.bin'
CHECKPOINT_TRANSFORMS = 'transforms.bin'
CHECKPOINT_META = 'meta'

# Metapath sampling
METAPATH_ATTEMPTS_PER_SAMPLE = 10

# Evaluation defaults
KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 300
CLASSIFY_TEST_FRACTION = 0.2
CLASSIFY_L2 = 1e-3
CLASSIFY_LEARNING_RATE = 0.5
CLASSIFY_ITERATIONS = 500
MAP_K = 100
NEIGHBOR_K = 10
# Similarities equal to this many decimals rank as ties
SCORE_TIE_DECIMALS = 12

# CLI exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

# Messages
MSG_THROUGHPUT_MODE = "⚠️  threads={threads}: throughput mode, updates are unsynchronized and results vary run to run"
MSG_UNKNOWN_NODE = "Unknown node '{name}'. Closest matches: {matches}"
