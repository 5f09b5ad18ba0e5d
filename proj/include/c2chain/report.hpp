#pragma once

#include <c2chain/catalog.hpp>
#include <c2chain/core_model.hpp>

#include <string>
#include <vector>

namespace c2chain
{

// Exact non-negative rational.
struct Ratio
{
    BitCount numerator = 0;
    BitCount denominator = 1;

    double value() const
    {
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
    // Percentage in tenths, rounded half up: 20/128 -> 156.
    BitCount percentTenths() const;

    bool operator==(const Ratio &) const = default;
};

// Strict ordering by cross multiplication.
bool operator<(const Ratio &a, const Ratio &b);

// header/payload or header/(header+payload). Throws Error(DivisionByZero)
// when the denominator is zero.
Ratio Overhead(BitCount headerBits, BitCount payloadBits, OverheadConvention convention);

// "15.6%"
std::string FormatPercent(const Ratio &ratio);

struct OverheadRow
{
    std::string attackLabel;
    Direction direction = Direction::Forward;
    BitCount headerBits = 20;
    BitCount payloadBits = 0;
    OverheadConvention convention = OverheadConvention::HeaderOverPayload;
    Ratio ratio;
    BitCount totalPacketBits = 0;

    bool operator==(const OverheadRow &) const = default;
};

inline constexpr const char *kSplitMinimumLabel = "split-minimum";

// Rows for every framed catalog entry, both ends of variable-size payloads,
// and the one-bit split minimum.
std::vector<OverheadRow> OverheadTable(const std::vector<AttackCatalogEntry> &entries);

BitCount MaxPacketBits(const std::vector<OverheadRow> &rows);

std::string FormatOverheadTable(const std::vector<OverheadRow> &rows);
std::string OverheadCsv(const std::vector<OverheadRow> &rows);

} // namespace c2chain
