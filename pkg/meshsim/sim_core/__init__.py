"""
Simulation Core

Discrete-event engine, shared radio medium and the two link personalities
(BLE advertising broadcast and 802.15.4-style CSMA/ARQ unicast).
"""

from .csma import CsmaMac, CsmaParams, SendResult
from .engine import EventHandle, SimEvent, Simulator
from .medium import (
    FrameLogEntry,
    Radio,
    RadioMedium,
    ReceptionOutcome,
    SleepGate,
    TrafficTally,
    Transmission,
)
from .radio import (
    ADVERTISING_CHANNELS,
    BLE_BITRATE,
    DOT154_ACK_LENGTH,
    DOT154_BITRATE,
    DOT154_CHANNEL,
    DOT154_OVERHEAD,
    MESH_ADV_OVERHEAD,
    MS,
    SECOND,
    Frame,
    FrameKind,
    ScanRotation,
    SimTime,
    TopologyMatrix,
    airtime_us,
)

__all__ = [
    'ADVERTISING_CHANNELS',
    'BLE_BITRATE',
    'DOT154_ACK_LENGTH',
    'DOT154_BITRATE',
    'DOT154_CHANNEL',
    'DOT154_OVERHEAD',
    'MESH_ADV_OVERHEAD',
    'MS',
    'SECOND',
    'CsmaMac',
    'CsmaParams',
    'EventHandle',
    'Frame',
    'FrameKind',
    'FrameLogEntry',
    'Radio',
    'RadioMedium',
    'ReceptionOutcome',
    'ScanRotation',
    'SendResult',
    'SimEvent',
    'SimTime',
    'Simulator',
    'SleepGate',
    'TopologyMatrix',
    'TrafficTally',
    'Transmission',
    'airtime_us',
]
