#pragma once

#include <c2chain/core_model.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <variant>
#include <vector>

// 20-bit covert-channel header codec, keyring, keystream ciphers and payload
// fragmentation.
//
// Wire layout (bit 1 is the most significant bit of the 20-bit word):
//
//   bits  1-4   key id            clear
//   bits  5-6   routing option    clear
//   bits  7-9   TTL               clear
//   bit  10     split flag        encrypted
//   bits 11-13  execution point   encrypted
//   bits 14-16  attack id         encrypted
//   bits 17-18  attack type       encrypted
//   bits 19-20  exit point        encrypted
//
// Every field is sent as (code - 1) so that the 1-based code tables fit their
// bit widths.

namespace c2chain::fivegpp
{

using Bits = std::vector<bool>;

Bits BitsFromUint(std::uint64_t value, std::size_t width);
std::uint64_t BitsToUint(const Bits &bits);
Bits Concat(const Bits &a, const Bits &b);
std::string BitsToHex(const Bits &bits);

inline constexpr std::size_t kHeaderBits = 20;
inline constexpr std::size_t kClearBits = 9;
inline constexpr std::uint32_t kWordMask = (1u << kHeaderBits) - 1;
inline constexpr BitCount kMinCapacity = static_cast<BitCount>(kHeaderBits) + 1;
inline constexpr int kMaxKeys = 16;
inline constexpr int kMaxTtl = 8;
inline constexpr int kMaxAttackId = 8;

using Key = std::array<std::uint8_t, 16>;

// Keystream transform. Implementations must be involutions for a fixed
// (key, salt) pair.
class Cipher
{
  public:
    virtual ~Cipher() = default;
    virtual Bits transform(const Bits &bits, const Key &key, const Bits &salt) const = 0;
    virtual const char *name() const = 0;
};

// XOR with a keystream drawn from a keyed SplitMix64 counter generator.
class PrfCipher final : public Cipher
{
  public:
    Bits transform(const Bits &bits, const Key &key, const Bits &salt) const override;
    const char *name() const override
    {
        return "prf";
    }
};

class IdentityCipher final : public Cipher
{
  public:
    Bits transform(const Bits &bits, const Key &, const Bits &) const override
    {
        return bits;
    }
    const char *name() const override
    {
        return "identity";
    }
};

const Cipher &DefaultCipher();
const Cipher &TestIdentityCipher();

Bits CipherTransform(const Bits &bits, const Key &key, const Bits &salt, const Cipher &cipher = DefaultCipher());

// Deterministic key material for a key id, standing in for the attacker's
// out-of-band key deployment.
Key DeriveKey(int keyId, std::uint64_t seed = 0);

class Keyring
{
  public:
    void add(int keyId, const Key &key);
    bool contains(int keyId) const;
    const Key &at(int keyId) const;
    std::size_t size() const
    {
        return m_entries.size();
    }
    std::vector<int> ids() const;

    // Keyring holding DeriveKey(id, seed) for each id.
    static Keyring Derived(const std::vector<int> &keyIds, std::uint64_t seed = 0);

  private:
    std::map<int, Key> m_entries;
};

// Execution-point codes (3 bits) and exit-point codes (2 bits).
std::optional<int> ExecutionCode(NodeId node);
std::optional<NodeId> ExecutionNode(int code);
std::optional<int> ExitCode(NodeId node);
std::optional<NodeId> ExitNode(int code);

int RoutingCode(RoutingOption option);
int AttackTypeCode(AttackType type);

struct GppHeader
{
    int keyId = 1;
    RoutingOption routing = RoutingOption::PF;
    int ttl = kMaxTtl;
    bool split = false;
    NodeId executionPoint = NodeId::UDM;
    int attackId = 1;
    AttackType attackType = AttackType::UdmKeyExtraction;
    NodeId exitPoint = NodeId::UE;

    bool operator==(const GppHeader &) const = default;
};

struct ClearFields
{
    int keyId = 1;
    RoutingOption routing = RoutingOption::PF;
    int ttl = 1;

    bool operator==(const ClearFields &) const = default;
};

struct Undecryptable
{
    ClearFields clear;
};

using DecodeResult = std::variant<GppHeader, Undecryptable>;

// Throws Error(FieldOutOfRange) or Error(MissingKey).
std::uint32_t EncodeHeader(const GppHeader &header, const Keyring &keyring, const Cipher &cipher = DefaultCipher(),
                           std::uint32_t fragmentIndex = 0);

// Throws Error(FieldOutOfRange) when a decoded field maps to no code point.
DecodeResult DecodeHeader(std::uint32_t word, const Keyring &keyring, const Cipher &cipher = DefaultCipher(),
                          std::uint32_t fragmentIndex = 0);

ClearFields DecodeClearFields(std::uint32_t word);

// Rewrites the clear TTL field. Usable without the key because the header
// salt does not cover the TTL.
std::uint32_t WithTtl(std::uint32_t word, int ttl);

struct Fragment
{
    GppHeader header;
    Bits payload;
    std::size_t index = 0;
    std::size_t total = 1;

    BitCount totalBits() const
    {
        return static_cast<BitCount>(kHeaderBits + payload.size());
    }
};

// Splits `payload` into ceil(len / (capacity - 20)) fragments. Throws
// Error(CapacityTooSmall) when capacity < 21.
std::vector<Fragment> FragmentPayload(const Bits &payload, BitCount perMessageCapacity, const GppHeader &header);

struct Incomplete
{
    std::size_t missing = 0;
};

using ReassembleResult = std::variant<Bits, Incomplete>;

// Throws Error(ConflictingTotals).
ReassembleResult Reassemble(const std::vector<Fragment> &fragments);

} // namespace c2chain::fivegpp
