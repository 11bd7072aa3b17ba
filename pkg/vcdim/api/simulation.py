from fastapi import APIRouter

from vcdim.schemas.config import SimulationConfig
from vcdim.schemas.requests import DatasetPayload, SimulationResponse
from vcdim.services.simgen import simulate

router = APIRouter()


@router.post("", response_model=SimulationResponse)
def simulate_dataset(config: SimulationConfig):
    simulation = simulate(config)
    return SimulationResponse(
        dataset=DatasetPayload.from_dataset(simulation.dataset),
        raw=DatasetPayload.from_dataset(simulation.raw),
        beta=simulation.beta.tolist(),
        config=config,
    )
