"""Jobs, compute profiles, synthetic generation, workload files and trace ingestion."""

from .generator import GeneratorParams, assign_eco_flags, generate_stream, synth_profile
from .io import load_workload, save_workload
from .profile import WINDOW_SECONDS, ComputeProfile, Job, JobStatus

__all__ = [
    "WINDOW_SECONDS",
    "ComputeProfile",
    "GeneratorParams",
    "Job",
    "JobStatus",
    "assign_eco_flags",
    "generate_stream",
    "load_workload",
    "save_workload",
    "synth_profile",
]
