#include "bhchaos/basis.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>

#include "bhchaos/error.hpp"

namespace bhchaos {

FockState::FockState(std::vector<int> occupations) : occupations_(std::move(occupations)) {
  if (occupations_.size() < 2) {
    throw ConfigError("a Fock state needs at least two sites");
  }
  for (int n : occupations_) {
    if (n < 0) throw ConfigError("negative site occupation");
  }
}

FockState FockState::parse(std::string_view text) {
  std::vector<int> occ;
  if (text.find(',') == std::string_view::npos) {
    for (char c : text) {
      if (c < '0' || c > '9') throw ConfigError("invalid Fock state '" + std::string(text) + "'");
      occ.push_back(c - '0');
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find(',', pos);
      if (end == std::string_view::npos) end = text.size();
      auto token = text.substr(pos, end - pos);
      int value = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ConfigError("invalid Fock state '" + std::string(text) + "'");
      }
      occ.push_back(value);
      pos = end + 1;
    }
  }
  return FockState(std::move(occ));
}

int FockState::particles() const {
  return std::accumulate(occupations_.begin(), occupations_.end(), 0);
}

bool FockState::is_palindrome() const {
  return std::equal(occupations_.begin(), occupations_.begin() + occupations_.size() / 2,
                    occupations_.rbegin());
}

std::string FockState::to_string() const {
  bool digits = std::all_of(occupations_.begin(), occupations_.end(), [](int n) { return n < 10; });
  std::string out;
  for (std::size_t j = 0; j < occupations_.size(); ++j) {
    if (digits) {
      out.push_back(static_cast<char>('0' + occupations_[j]));
    } else {
      if (j) out.push_back(',');
      out += std::to_string(occupations_[j]);
    }
  }
  return out;
}

FockState reflect(const FockState& state) {
  std::vector<int> occ(state.occupations().rbegin(), state.occupations().rend());
  return FockState(std::move(occ));
}

std::uint64_t fock_dimension(int particles, int sites) {
  if (particles < 0 || sites < 1) throw ConfigError("invalid (N, L) for a Fock space");
  // binomial(N+L-1, k) with k = min(N, L-1), exact at every step.
  const std::uint64_t n = static_cast<std::uint64_t>(particles) + sites - 1;
  const std::uint64_t k = std::min<std::uint64_t>(particles, sites - 1);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw CapacityError("Fock space dimension overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

std::size_t FockBasis::KeyHash::operator()(Key key) const noexcept {
  // splitmix64 finalizer over both halves
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(static_cast<std::uint64_t>(key) ^ mix(static_cast<std::uint64_t>(key >> 64)));
}

FockBasis::Key FockBasis::pack(std::span<const std::uint8_t> occupations) const {
  Key key = 0;
  for (std::uint8_t n : occupations) key = (key << bits_per_site_) | n;
  return key;
}

FockBasis::FockBasis(int particles, int sites, std::uint64_t cap)
    : particles_(particles), sites_(sites) {
  if (sites < 2) throw ConfigError("a lattice needs L >= 2 sites");
  if (particles < 0) throw ConfigError("particle number must be non-negative");
  if (particles > 255) throw CapacityError("occupations above 255 are not supported");
  bits_per_site_ = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(particles))));
  if (bits_per_site_ * sites > 128) {
    throw CapacityError("occupation vector does not fit the 128-bit packed index key");
  }
  const std::uint64_t dim = fock_dimension(particles, sites);
  if (dim > cap || dim > std::numeric_limits<std::uint32_t>::max()) {
    throw CapacityError("Fock space dimension " + std::to_string(dim) + " exceeds cap " +
                        std::to_string(cap));
  }
  size_ = static_cast<std::size_t>(dim);
  occupations_.resize(size_ * sites_);
  index_.reserve(size_);

  std::vector<std::uint8_t> current(sites_, 0);
  current[0] = static_cast<std::uint8_t>(particles);
  for (std::size_t i = 0; i < size_; ++i) {
    std::copy(current.begin(), current.end(), occupations_.begin() + i * sites_);
    index_.emplace(pack(current), static_cast<std::uint32_t>(i));
    if (i + 1 == size_) break;
    // Rightmost non-empty site before the last one moves one particle right
    // and collects everything to its right.
    int k = sites_ - 2;
    while (current[k] == 0) --k;
    int tail = current[sites_ - 1];
    current[sites_ - 1] = 0;
    --current[k];
    current[k + 1] = static_cast<std::uint8_t>(tail + 1);
  }

  mirror_.resize(size_);
  std::vector<std::uint8_t> reversed(sites_);
  for (std::size_t i = 0; i < size_; ++i) {
    auto occ = occupations(i);
    std::reverse_copy(occ.begin(), occ.end(), reversed.begin());
    mirror_[i] = index_.at(pack(reversed));
  }
}

FockState FockBasis::state(std::size_t index) const {
  auto occ = occupations(index);
  return FockState(std::vector<int>(occ.begin(), occ.end()));
}

std::int64_t FockBasis::find(std::span<const std::uint8_t> occupations) const {
  if (occupations.size() != static_cast<std::size_t>(sites_)) return -1;
  int total = 0;
  for (auto n : occupations) total += n;
  if (total != particles_) return -1;
  auto it = index_.find(pack(occupations));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::int64_t FockBasis::find(const FockState& state) const {
  if (state.sites() != sites_ || state.particles() != particles_) return -1;
  std::vector<std::uint8_t> occ(state.occupations().begin(), state.occupations().end());
  return find(occ);
}

std::size_t FockBasis::index(const FockState& state) const {
  auto idx = find(state);
  if (idx < 0) {
    throw ConfigError("state |" + state.to_string() + "> is not in the basis (N=" +
                      std::to_string(particles_) + ", L=" + std::to_string(sites_) + ")");
  }
  return static_cast<std::size_t>(idx);
}

std::shared_ptr<const FockBasis> enumerate_basis(int particles, int sites, std::uint64_t cap) {
  return std::make_shared<const FockBasis>(particles, sites, cap);
}

std::string_view to_string(Parity parity) {
  switch (parity) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::none: return "full";
  }
  return "?";
}

SectorBasis::SectorBasis(std::shared_ptr<const FockBasis> fock, Parity parity)
    : fock_(std::move(fock)), parity_(parity) {
  const std::size_t dim = fock_->size();
  member_of_.assign(dim, -1);
  sign_of_.assign(dim, 0);
  if (parity_ == Parity::none) {
    members_.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      member_of_[i] = static_cast<std::int32_t>(i);
      sign_of_[i] = 1;
      members_.push_back({static_cast<std::uint32_t>(i), -1});
    }
    return;
  }
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t j = fock_->mirror(i);
    if (i == j) {
      if (parity_ == Parity::even) {
        member_of_[i] = static_cast<std::int32_t>(members_.size());
        sign_of_[i] = 1;
        members_.push_back({static_cast<std::uint32_t>(i), -1});
      }
      continue;
    }
    auto a = fock_->occupations(i);
    auto b = fock_->occupations(j);
    if (!std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end())) continue;
    const auto m = static_cast<std::int32_t>(members_.size());
    member_of_[i] = m;
    member_of_[j] = m;
    sign_of_[i] = 1;
    sign_of_[j] = parity_ == Parity::even ? 1 : -1;
    members_.push_back({static_cast<std::uint32_t>(i), static_cast<std::int32_t>(j)});
  }
}

double SectorBasis::weight(std::size_t index) const {
  return members_[index].paired() ? M_SQRT1_2 : 1.0;
}

bool SectorBasis::locate(std::size_t fock_index, SectorComponent& out) const {
  const std::int32_t m = member_of_[fock_index];
  if (m < 0) return false;
  out.member = static_cast<std::uint32_t>(m);
  out.amplitude = sign_of_[fock_index] * weight(static_cast<std::size_t>(m));
  return true;
}

std::size_t SectorBasis::member_of(const FockState& state) const {
  const std::size_t idx = fock_->index(state);
  if (member_of_[idx] < 0) {
    throw ConfigError("state |" + state.to_string() + "> has no component in the " +
                      std::string(to_string(parity_)) + " sector");
  }
  return static_cast<std::size_t>(member_of_[idx]);
}

std::shared_ptr<const SectorBasis> build_parity_basis(std::shared_ptr<const FockBasis> basis,
                                                      Parity sector) {
  if (sector == Parity::none) throw ConfigError("parity sector must be even or odd");
  return std::make_shared<const SectorBasis>(std::move(basis), sector);
}

std::shared_ptr<const SectorBasis> full_sector(std::shared_ptr<const FockBasis> basis) {
  return std::make_shared<const SectorBasis>(std::move(basis), Parity::none);
}

std::size_t count_palindromes(const FockBasis& basis) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < basis.size(); ++i) count += basis.mirror(i) == i;
  return count;
}

}  // namespace bhchaos
