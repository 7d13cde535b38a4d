"""solarsite: land-type-specific solar PV supply curves and land-use
prioritization scenario analysis for the Eastern Interconnection."""

from .capacity import (CAPACITY_BINS, CapacityBin, DensityTable,
                       SuitabilityTable, capacity_bin, flat_roof_packing,
                       land_capacity, land_capacity_chunks, roof_capacity,
                       roof_panel_area, split_capacity)
from .costs import (CostParams, FinanceParams, SupplyPoint, adjusted_capex,
                    crf, lcoe, site_lcoe, technology_for, transmission_adder)
from .curves import (SupplyCurve, build_curve, capacity_below_price,
                     cost_at_capacity, merge_curves)
from .domain import (CONTAMINATED_CATEGORIES, GREENFIELD_CATEGORIES,
                     GROUND_CATEGORIES, LandCategory, MeteoSeries, Parcel,
                     ParcelSet, REGION_ORDER, Region, ROOFTOP_CATEGORIES,
                     RoofSizeClass, ScreenCriteria, ScreenDecision, TargetSet,
                     classify_building, screen_parcel, validate_targets)
from .errors import (ConfigError, DomainError, InfeasibleError, ParseError,
                     SolarSiteError, ValidationError)
from .ingest import (load_costs, load_density, load_meteo, load_orientations,
                     load_parcels, load_scenario, load_suitability,
                     load_targets)
from .pipeline import RunConfig, load_run_config, run_pipeline
from .scenario import (AllocationResult, Mode, ScenarioSpec, Scheme, allocate,
                       compare_scenarios, metrics, scheme_order)
from .solarsim import (CFSeries, Orientation, OrientationDistribution,
                       OrientationWeight, SimConfig, SolarPosition,
                       county_mean_cf, declination, poa_irradiance,
                       simulate_roof_cf, simulate_utility_cf, solar_position,
                       tracker_rotation)

__version__ = "0.1.0"
