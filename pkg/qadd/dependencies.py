"""
Service getters shared by the CLI
"""

from functools import lru_cache

from qadd.services.capacity_service import CapacityService
from qadd.services.certificate_service import DegradabilityService
from qadd.services.experiment_service import ExperimentService
from qadd.services.singularity_service import SingularityService
from qadd.services.superadditivity_service import SuperadditivityService


# Default-configured instances, cached for reuse across commands
@lru_cache()
def get_capacity_service() -> CapacityService:
    """Get capacity service instance"""
    return CapacityService()


@lru_cache()
def get_singularity_service() -> SingularityService:
    """Get singularity service instance"""
    return SingularityService()


# Services that depend on other services
@lru_cache()
def get_degradability_service() -> DegradabilityService:
    """Get degradability service instance"""
    return DegradabilityService(get_capacity_service())


@lru_cache()
def get_superadditivity_service() -> SuperadditivityService:
    """Get superadditivity service instance"""
    return SuperadditivityService(get_capacity_service(), get_singularity_service())


def get_experiment_service(seed: int, workers: int) -> ExperimentService:
    """Experiment service for one run; not cached since seed and workers vary"""
    return ExperimentService(
        seed=seed,
        workers=workers,
        degradability_service=get_degradability_service(),
        singularity_service=get_singularity_service(),
        superadditivity_service=get_superadditivity_service(),
    )
