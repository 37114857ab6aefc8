from .inference import build_inference_prompt, evidence_block, extract_answer
from .pipeline import (ENTITY_SCOPES, Mode, PipelineConfig, Prediction, answer, answer_all, dump_predictions,
                       dump_subgraphs)
from .samples import DATASETS, InvalidSample, QASample, load_samples, read_samples, write_samples
