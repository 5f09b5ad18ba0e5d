#include <c2chain/report.hpp>

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace c2chain
{

BitCount Ratio::percentTenths() const
{
    // round(1000 n / d) with ties going up
    return (2 * 1000 * numerator + denominator) / (2 * denominator);
}

bool operator<(const Ratio &a, const Ratio &b)
{
    return a.numerator * b.denominator < b.numerator * a.denominator;
}

Ratio Overhead(BitCount headerBits, BitCount payloadBits, OverheadConvention convention)
{
    if (headerBits < 0 || payloadBits < 0)
        throw Error(ErrorCode::InvalidScenario, "negative bit count");
    BitCount denominator =
        convention == OverheadConvention::HeaderOverPayload ? payloadBits : headerBits + payloadBits;
    if (denominator == 0)
        throw Error(ErrorCode::DivisionByZero, "overhead of an empty payload");
    return {headerBits, denominator};
}

std::string FormatPercent(const Ratio &ratio)
{
    auto tenths = ratio.percentTenths();
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "%";
}

namespace
{

OverheadRow MakeRow(std::string label, Direction direction, BitCount payload, OverheadConvention convention)
{
    OverheadRow row;
    row.attackLabel = std::move(label);
    row.direction = direction;
    row.headerBits = fivegpp::kHeaderBits;
    row.payloadBits = payload;
    row.convention = convention;
    row.ratio = Overhead(row.headerBits, payload, convention);
    row.totalPacketBits = row.headerBits + payload;
    return row;
}

} // namespace

std::vector<OverheadRow> OverheadTable(const std::vector<AttackCatalogEntry> &entries)
{
    std::vector<OverheadRow> rows;
    for (const auto &entry : entries)
    {
        if (!entry.framed)
            continue;
        const auto &attack = entry.attack;
        std::string label = attack.name == "A1" ? "A1-SUPI" : attack.name;
        if (entry.forwardBitsMin && *entry.forwardBitsMin != attack.forwardBits)
        {
            rows.push_back(MakeRow(label + " (" + std::to_string(attack.forwardBits) + " bit)", Direction::Forward,
                                   attack.forwardBits, OverheadConvention::HeaderOverPayload));
            rows.push_back(MakeRow(label + " (" + std::to_string(*entry.forwardBitsMin) + " bit)",
                                   Direction::Forward, *entry.forwardBitsMin, OverheadConvention::HeaderOverPayload));
        }
        else
        {
            rows.push_back(
                MakeRow(label, Direction::Forward, attack.forwardBits, OverheadConvention::HeaderOverPayload));
        }
        if (attack.exit && attack.backwardBits > 0)
            rows.push_back(MakeRow(label, Direction::Backward, attack.backwardBits, entry.backwardConvention));
    }
    rows.push_back(MakeRow(kSplitMinimumLabel, Direction::Forward, 1, OverheadConvention::HeaderOverPayload));
    return rows;
}

BitCount MaxPacketBits(const std::vector<OverheadRow> &rows)
{
    BitCount best = 0;
    for (const auto &row : rows)
        best = std::max(best, row.totalPacketBits);
    return best;
}

std::string FormatOverheadTable(const std::vector<OverheadRow> &rows)
{
    std::ostringstream out;
    out << std::left << std::setw(18) << "attack" << std::setw(10) << "direction" << std::right << std::setw(8)
        << "header" << std::setw(9) << "payload" << std::setw(9) << "packet" << std::setw(10) << "overhead"
        << "  convention\n";
    for (const auto &row : rows)
    {
        out << std::left << std::setw(18) << row.attackLabel << std::setw(10) << ToString(row.direction)
            << std::right << std::setw(8) << row.headerBits << std::setw(9) << row.payloadBits << std::setw(9)
            << row.totalPacketBits << std::setw(10) << FormatPercent(row.ratio) << "  " << ToString(row.convention)
            << "\n";
    }
    out << "max packet: " << MaxPacketBits(rows) << " bit\n";
    return out.str();
}

std::string OverheadCsv(const std::vector<OverheadRow> &rows)
{
    std::ostringstream out;
    out << "attack,direction,header_bits,payload_bits,packet_bits,overhead_percent,convention\n";
    for (const auto &row : rows)
    {
        auto tenths = row.ratio.percentTenths();
        out << row.attackLabel << ',' << ToString(row.direction) << ',' << row.headerBits << ',' << row.payloadBits
            << ',' << row.totalPacketBits << ',' << tenths / 10 << '.' << tenths % 10 << ','
            << ToString(row.convention) << '\n';
    }
    return out.str();
}

} // namespace c2chain
