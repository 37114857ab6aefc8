from .experiments import (DEFAULT_KS, DEFAULT_YEARS, EMPTY, Evaluation, EvolutionPoint, evaluate, evolution_curve,
                          leave_one_out, query_length_stats, run_evaluation, sampling_times, sweep_k, write_evolution,
                          write_loo, write_sweep)
from .filtering import (DEFAULT_KEYWORDS, VERDICTS, JudgeResult, build_judge_prompt, filter_report, judge,
                        keyword_filter, llm_judge, matches, read_verdict, write_filter_report)
from .report import DatasetScore, EvalReport, fingerprint, score, write_report
