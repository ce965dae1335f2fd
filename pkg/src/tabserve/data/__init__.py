from .schema import BUILTIN_SCHEMAS, ColumnSpec, DatasetSchema, adult_schema, bls_schema, hr_schema, schema_by_name
from .ingest import QuarantinedRow, RawTable, ingest_csv
from .preprocess import FeatureMatrix, PreprocessPlan, TransformResult, fit_preprocess, fit_transform
from .storage import EncryptedBlob, EncryptedStore, generate_key, matrix_from_bytes, matrix_to_bytes
from .events import DirectoryWatcher, FailureEvent, IngestionJob
from .synth import GENERATORS, generate_adult_csv, generate_bls_csv, generate_hr_csv

__all__ = [
    "DatasetSchema", "ColumnSpec", "BUILTIN_SCHEMAS", "schema_by_name",
    "hr_schema", "adult_schema", "bls_schema",
    "RawTable", "QuarantinedRow", "ingest_csv",
    "FeatureMatrix", "PreprocessPlan", "TransformResult", "fit_preprocess", "fit_transform",
    "EncryptedStore", "EncryptedBlob", "generate_key", "matrix_to_bytes", "matrix_from_bytes",
    "DirectoryWatcher", "IngestionJob", "FailureEvent",
    "generate_hr_csv", "generate_adult_csv", "generate_bls_csv", "GENERATORS",
]
