#include "fogsim/pricing.hpp"
#include "fogsim/error.hpp"

#include <cmath>
#include <vector>

namespace fogsim::pricing {

namespace {

constexpr double per_million = 1e-6;

double chunked(const std::vector<double>& sizes_kb, double unit_kb)
{
    double chunks = 0.0;
    for (double kb : sizes_kb) {
        if (kb < 0.0) throw Error(ErrorKind::OutOfRange, "message size must be non-negative");
        chunks += std::ceil(kb / unit_kb);
    }
    return chunks;
}

template <class PerTierValue>
double weighted(const UsageLedger& ledger, const PriceBook& prices, PerTierValue value)
{
    return value(ledger.cloud) + value(ledger.server) / prices.server_divisor
         + value(ledger.device) / prices.device_divisor;
}

} // namespace

void validate(const PriceBook& prices)
{
    if (prices.connectivity_unit < 0.0 || prices.messaging_unit < 0.0 || prices.registry_unit < 0.0
        || prices.processing_unit < 0.0) {
        throw Error(ErrorKind::Config, "prices must be non-negative");
    }
    if (!(prices.data_unit_kb > 0.0)) throw Error(ErrorKind::InvalidUnit, "data unit must be positive");
    if (prices.server_divisor < 1.0 || prices.device_divisor < 1.0) {
        throw Error(ErrorKind::InvalidUnit, "tier divisors must be >= 1");
    }
}

Dollars connectivity_cost(const UsageLedger& ledger, const PriceBook& prices)
{
    validate(prices);
    const double minutes = weighted(ledger, prices, [](const auto& t) { return t.connectivity_minutes; });
    return prices.connectivity_unit * minutes * per_million;
}

Dollars messaging_cost(const UsageLedger& ledger, const PriceBook& prices)
{
    validate(prices);
    const double chunks =
        weighted(ledger, prices, [&](const auto& t) { return chunked(t.message_kb, prices.data_unit_kb); });
    return prices.messaging_unit * chunks * per_million;
}

Dollars registry_cost(const UsageLedger& ledger, const PriceBook& prices)
{
    validate(prices);
    const double kb = weighted(ledger, prices, [](const auto& t) { return t.registry_kb; });
    return prices.registry_unit * kb * per_million;
}

Dollars processing_cost(const UsageLedger& ledger, const PriceBook& prices)
{
    validate(prices);
    const double chunks =
        weighted(ledger, prices, [&](const auto& t) { return chunked(t.processing_kb, prices.data_unit_kb); });
    return prices.processing_unit * chunks * per_million;
}

Dollars total_app_cost(const UsageLedger& ledger, const PriceBook& prices, Registry registry)
{
    Dollars total = connectivity_cost(ledger, prices) + messaging_cost(ledger, prices)
                  + processing_cost(ledger, prices);
    if (registry == Registry::Included) total += registry_cost(ledger, prices);
    return total;
}

} // namespace fogsim::pricing
