#pragma once

#include "fogsim/core_model.hpp"

namespace fogsim::pricing {

// Tiered usage pricing. Cloud usage is billed at the unit price, Fog server
// usage at 1/FS_x of it and Fog device usage at 1/FD_x. Unit prices are per
// million, so every total carries a 1e-6 factor.

Dollars connectivity_cost(const UsageLedger& ledger, const PriceBook& prices);

/// Each message is billed in whole `data_unit_kb` chunks.
Dollars messaging_cost(const UsageLedger& ledger, const PriceBook& prices);

/// Billed on raw KB, no rounding.
Dollars registry_cost(const UsageLedger& ledger, const PriceBook& prices);

Dollars processing_cost(const UsageLedger& ledger, const PriceBook& prices);

enum class Registry { Excluded, Included };

/// Total per-application cost. Registry/shadow usage is left out unless asked
/// for, since the simulated platform never touches it.
Dollars total_app_cost(const UsageLedger& ledger, const PriceBook& prices,
                       Registry registry = Registry::Excluded);

/// Throws `Error` when the price book breaks its invariants.
void validate(const PriceBook& prices);

} // namespace fogsim::pricing
