#include <c2chain/fivegpp.hpp>

#include <algorithm>
#include <set>

namespace c2chain::fivegpp
{

namespace
{

std::uint64_t Mix(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t LoadWord(const Key &key, std::size_t offset)
{
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < 8; i++)
        value |= static_cast<std::uint64_t>(key[offset + i]) << (8 * i);
    return value;
}

// field positions, counted from the least significant bit of the word
constexpr int kKeyShift = 16;
constexpr int kRoutingShift = 14;
constexpr int kTtlShift = 11;
constexpr int kSplitShift = 10;
constexpr int kExecShift = 7;
constexpr int kAttackIdShift = 4;
constexpr int kTypeShift = 2;
constexpr std::uint32_t kEncryptedMask = (1u << 11) - 1;

constexpr NodeId kExecutionCodes[] = {NodeId::UDM, NodeId::AMF, NodeId::GNB, NodeId::SMF,
                                      NodeId::AUSF, NodeId::PCF, NodeId::UPF, NodeId::NEF};
constexpr NodeId kExitCodes[] = {NodeId::UE, NodeId::UPF, NodeId::SEPP, NodeId::NEF};

[[noreturn]] void OutOfRange(const std::string &field)
{
    throw Error(ErrorCode::FieldOutOfRange, "field out of range: " + field);
}

Bits HeaderSalt(std::uint32_t word, std::uint32_t fragmentIndex)
{
    // bits 1-6 only; the TTL is rewritten hop by hop by nodes without the key
    auto salt = BitsFromUint(word >> kRoutingShift, 6);
    return Concat(salt, BitsFromUint(fragmentIndex, 32));
}

} // namespace

Bits BitsFromUint(std::uint64_t value, std::size_t width)
{
    Bits bits(width);
    for (std::size_t i = 0; i < width; i++)
        bits[i] = ((value >> (width - 1 - i)) & 1u) != 0;
    return bits;
}

std::uint64_t BitsToUint(const Bits &bits)
{
    std::uint64_t value = 0;
    for (bool bit : bits)
        value = (value << 1) | (bit ? 1u : 0u);
    return value;
}

Bits Concat(const Bits &a, const Bits &b)
{
    Bits out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::string BitsToHex(const Bits &bits)
{
    static const char *digits = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < bits.size(); i += 4)
    {
        int nibble = 0;
        for (std::size_t j = 0; j < 4; j++)
        {
            nibble <<= 1;
            if (i + j < bits.size() && bits[i + j])
                nibble |= 1;
        }
        out.push_back(digits[nibble]);
    }
    return out;
}

Bits PrfCipher::transform(const Bits &bits, const Key &key, const Bits &salt) const
{
    std::uint64_t k0 = LoadWord(key, 0);
    std::uint64_t k1 = LoadWord(key, 8);
    std::uint64_t state = Mix(k0) ^ Mix(k1 + 0x632be59bd9b4e019ULL);
    state = Mix(state ^ salt.size());
    for (std::size_t i = 0; i < salt.size(); i += 64)
    {
        std::uint64_t chunk = 0;
        for (std::size_t j = i; j < std::min(i + 64, salt.size()); j++)
            chunk = (chunk << 1) | (salt[j] ? 1u : 0u);
        state = Mix(state ^ chunk);
    }

    Bits out = bits;
    std::uint64_t block = 0;
    for (std::size_t i = 0; i < out.size(); i++)
    {
        if (i % 64 == 0)
            block = Mix(state ^ Mix(i / 64 + k1));
        if ((block >> (i % 64)) & 1u)
            out[i] = !out[i];
    }
    return out;
}

const Cipher &DefaultCipher()
{
    static const PrfCipher cipher;
    return cipher;
}

const Cipher &TestIdentityCipher()
{
    static const IdentityCipher cipher;
    return cipher;
}

Bits CipherTransform(const Bits &bits, const Key &key, const Bits &salt, const Cipher &cipher)
{
    return cipher.transform(bits, key, salt);
}

Key DeriveKey(int keyId, std::uint64_t seed)
{
    Key key{};
    std::uint64_t a = Mix(seed ^ (static_cast<std::uint64_t>(keyId) << 32));
    std::uint64_t b = Mix(a ^ 0x5851f42d4c957f2dULL);
    for (std::size_t i = 0; i < 8; i++)
    {
        key[i] = static_cast<std::uint8_t>(a >> (8 * i));
        key[8 + i] = static_cast<std::uint8_t>(b >> (8 * i));
    }
    return key;
}

void Keyring::add(int keyId, const Key &key)
{
    if (keyId < 1 || keyId > kMaxKeys)
        OutOfRange("key_id");
    m_entries[keyId] = key;
}

bool Keyring::contains(int keyId) const
{
    return m_entries.contains(keyId);
}

const Key &Keyring::at(int keyId) const
{
    auto it = m_entries.find(keyId);
    if (it == m_entries.end())
        throw Error(ErrorCode::MissingKey, "missing key " + std::to_string(keyId));
    return it->second;
}

std::vector<int> Keyring::ids() const
{
    std::vector<int> out;
    for (const auto &[id, key] : m_entries)
        out.push_back(id);
    return out;
}

Keyring Keyring::Derived(const std::vector<int> &keyIds, std::uint64_t seed)
{
    Keyring ring;
    for (int id : keyIds)
        ring.add(id, DeriveKey(id, seed));
    return ring;
}

std::optional<int> ExecutionCode(NodeId node)
{
    for (int i = 0; i < 8; i++)
        if (kExecutionCodes[i] == node)
            return i + 1;
    return std::nullopt;
}

std::optional<NodeId> ExecutionNode(int code)
{
    if (code < 1 || code > 8)
        return std::nullopt;
    return kExecutionCodes[code - 1];
}

std::optional<int> ExitCode(NodeId node)
{
    for (int i = 0; i < 4; i++)
        if (kExitCodes[i] == node)
            return i + 1;
    return std::nullopt;
}

std::optional<NodeId> ExitNode(int code)
{
    if (code < 1 || code > 4)
        return std::nullopt;
    return kExitCodes[code - 1];
}

int RoutingCode(RoutingOption option)
{
    switch (option)
    {
    case RoutingOption::PF:
        return 1;
    case RoutingOption::RR:
        return 2;
    case RoutingOption::EERR:
        return 3;
    }
    return 4;
}

int AttackTypeCode(AttackType type)
{
    switch (type)
    {
    case AttackType::UdmKeyExtraction:
        return 1;
    case AttackType::PwsAbuse:
        return 2;
    case AttackType::UeLocalization:
        return 3;
    }
    return 4;
}

std::uint32_t EncodeHeader(const GppHeader &header, const Keyring &keyring, const Cipher &cipher,
                           std::uint32_t fragmentIndex)
{
    if (header.keyId < 1 || header.keyId > kMaxKeys)
        OutOfRange("key_id");
    if (header.ttl < 1 || header.ttl > kMaxTtl)
        OutOfRange("ttl");
    if (header.attackId < 1 || header.attackId > kMaxAttackId)
        OutOfRange("attack_id");
    auto exec = ExecutionCode(header.executionPoint);
    if (!exec)
        OutOfRange(std::string("execution_point ") + ToString(header.executionPoint));
    auto exit = ExitCode(header.exitPoint);
    if (!exit)
        OutOfRange(std::string("exit_point ") + ToString(header.exitPoint));
    const Key &key = keyring.at(header.keyId);

    std::uint32_t word = 0;
    word |= static_cast<std::uint32_t>(header.keyId - 1) << kKeyShift;
    word |= static_cast<std::uint32_t>(RoutingCode(header.routing) - 1) << kRoutingShift;
    word |= static_cast<std::uint32_t>(header.ttl - 1) << kTtlShift;
    word |= static_cast<std::uint32_t>(header.split ? 1 : 0) << kSplitShift;
    word |= static_cast<std::uint32_t>(*exec - 1) << kExecShift;
    word |= static_cast<std::uint32_t>(header.attackId - 1) << kAttackIdShift;
    word |= static_cast<std::uint32_t>(AttackTypeCode(header.attackType) - 1) << kTypeShift;
    word |= static_cast<std::uint32_t>(*exit - 1);

    auto hidden = BitsFromUint(word & kEncryptedMask, 11);
    hidden = cipher.transform(hidden, key, HeaderSalt(word, fragmentIndex));
    return (word & ~kEncryptedMask) | static_cast<std::uint32_t>(BitsToUint(hidden));
}

ClearFields DecodeClearFields(std::uint32_t word)
{
    word &= kWordMask;
    ClearFields clear;
    clear.keyId = static_cast<int>((word >> kKeyShift) & 0xF) + 1;
    switch ((word >> kRoutingShift) & 0x3)
    {
    case 0:
        clear.routing = RoutingOption::PF;
        break;
    case 1:
        clear.routing = RoutingOption::RR;
        break;
    case 2:
        clear.routing = RoutingOption::EERR;
        break;
    default:
        OutOfRange("routing_option");
    }
    clear.ttl = static_cast<int>((word >> kTtlShift) & 0x7) + 1;
    return clear;
}

DecodeResult DecodeHeader(std::uint32_t word, const Keyring &keyring, const Cipher &cipher,
                          std::uint32_t fragmentIndex)
{
    word &= kWordMask;
    auto clear = DecodeClearFields(word);
    if (!keyring.contains(clear.keyId))
        return Undecryptable{clear};

    auto hidden = BitsFromUint(word & kEncryptedMask, 11);
    hidden = cipher.transform(hidden, keyring.at(clear.keyId), HeaderSalt(word, fragmentIndex));
    auto plain = static_cast<std::uint32_t>(BitsToUint(hidden));

    GppHeader header;
    header.keyId = clear.keyId;
    header.routing = clear.routing;
    header.ttl = clear.ttl;
    header.split = ((plain >> kSplitShift) & 1u) != 0;
    header.executionPoint = *ExecutionNode(static_cast<int>((plain >> kExecShift) & 0x7) + 1);
    header.attackId = static_cast<int>((plain >> kAttackIdShift) & 0x7) + 1;
    switch ((plain >> kTypeShift) & 0x3)
    {
    case 0:
        header.attackType = AttackType::UdmKeyExtraction;
        break;
    case 1:
        header.attackType = AttackType::PwsAbuse;
        break;
    case 2:
        header.attackType = AttackType::UeLocalization;
        break;
    default:
        OutOfRange("attack_type");
    }
    header.exitPoint = *ExitNode(static_cast<int>(plain & 0x3) + 1);
    return header;
}

std::uint32_t WithTtl(std::uint32_t word, int ttl)
{
    if (ttl < 1 || ttl > kMaxTtl)
        OutOfRange("ttl");
    word &= ~(0x7u << kTtlShift);
    return word | (static_cast<std::uint32_t>(ttl - 1) << kTtlShift);
}

std::vector<Fragment> FragmentPayload(const Bits &payload, BitCount perMessageCapacity, const GppHeader &header)
{
    if (perMessageCapacity < kMinCapacity)
        throw Error(ErrorCode::CapacityTooSmall, "capacity " + std::to_string(perMessageCapacity) +
                                                     " below minimum " + std::to_string(kMinCapacity));
    std::vector<Fragment> fragments;
    if (payload.empty())
        return fragments;

    auto chunk = static_cast<std::size_t>(perMessageCapacity) - kHeaderBits;
    std::size_t total = (payload.size() + chunk - 1) / chunk;
    for (std::size_t i = 0; i < total; i++)
    {
        Fragment fragment;
        fragment.header = header;
        fragment.header.split = total > 1;
        auto begin = payload.begin() + static_cast<std::ptrdiff_t>(i * chunk);
        auto end = payload.begin() + static_cast<std::ptrdiff_t>(std::min(payload.size(), (i + 1) * chunk));
        fragment.payload.assign(begin, end);
        fragment.index = i;
        fragment.total = total;
        fragments.push_back(std::move(fragment));
    }
    return fragments;
}

ReassembleResult Reassemble(const std::vector<Fragment> &fragments)
{
    if (fragments.empty())
        return Bits{};

    std::set<std::size_t> totals;
    for (const auto &fragment : fragments)
        totals.insert(fragment.total);
    if (totals.size() != 1)
        throw Error(ErrorCode::ConflictingTotals, "fragments disagree on total count");

    std::size_t total = *totals.begin();
    std::vector<const Fragment *> slots(total, nullptr);
    for (const auto &fragment : fragments)
    {
        if (fragment.index >= total)
            throw Error(ErrorCode::ConflictingTotals, "fragment index beyond total count");
        if (slots[fragment.index] == nullptr)
            slots[fragment.index] = &fragment;
    }

    auto missing = static_cast<std::size_t>(std::count(slots.begin(), slots.end(), nullptr));
    if (missing > 0)
        return Incomplete{missing};

    Bits out;
    for (const auto *fragment : slots)
        out.insert(out.end(), fragment->payload.begin(), fragment->payload.end());
    return out;
}

} // namespace c2chain::fivegpp
