#include "surfsub/presentation.hpp"

#include <cctype>
#include <charconv>

namespace surfsub {

  Presentation::Presentation(int rank, std::vector<Word> relators)
      : _rank(rank) {
    if (rank < 0) {
      throw InvalidInput("presentation rank must be non-negative");
    }
    for (auto const& r : relators) {
      Word reduced = cyclic_reduce(free_reduce(r.letters(), rank));
      if (!reduced.empty()) {
        _relators.push_back(std::move(reduced));
      }
    }
  }

  Presentation one_relator(int rank, Word const& w) {
    Word r = cyclic_reduce(free_reduce(w.letters(), rank));
    if (r.empty()) {
      throw InvalidInput("one_relator: relator is trivial");
    }
    return Presentation(rank, {r});
  }

  Presentation bs(int n, int m) {
    if (n == 0 || m == 0) {
      throw InvalidInput("bs: parameters must be nonzero");
    }
    Letter const        a{1, 1}, b{2, 1};
    std::vector<Letter> r{b.inverse()};
    for (int i = 0; i < std::abs(n); ++i) {
      r.push_back(n > 0 ? a : a.inverse());
    }
    r.push_back(b);
    for (int i = 0; i < std::abs(m); ++i) {
      r.push_back(m > 0 ? a.inverse() : a);
    }
    return Presentation(2, {Word(std::move(r))});
  }

  Presentation free_product_with_free(Presentation const& p, int extra_rank) {
    if (extra_rank < 0) {
      throw InvalidInput("free_product_with_free: negative extra rank");
    }
    return Presentation(p.rank() + extra_rank, p.relators());
  }

  RankReduction absent_generator_reduction(Presentation const& p) {
    if (p.relators().size() != 1) {
      throw InvalidInput("absent_generator_reduction expects one relator");
    }
    auto const       profile = occurrence_profile(p.relators().front(), p.rank());
    std::vector<int> new_index(p.rank() + 1, 0);
    RankReduction    out;
    int              next = 0;
    for (int g = 1; g <= p.rank(); ++g) {
      if (profile[g - 1] == 0) {
        out.absent.push_back(g);
      } else {
        new_index[g] = ++next;
      }
    }
    std::vector<Letter> letters;
    for (Letter x : p.relators().front().letters()) {
      letters.push_back({new_index[x.generator], x.sign});
    }
    out.reduced    = Presentation(next, {Word(std::move(letters))});
    out.extra_rank = static_cast<int>(out.absent.size());
    return out;
  }

  namespace {
    std::string_view trim(std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
      }
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
      }
      return s;
    }
  }  // namespace

  Presentation parse_presentation(std::string_view text) {
    int                           rank = -1;
    std::vector<std::string_view> relator_texts;
    std::vector<std::size_t>      relator_columns;
    std::size_t                   pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find(';', pos);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      std::string_view field = text.substr(pos, end - pos);
      std::size_t      field_start = pos;
      pos = end + 1;
      if (trim(field).empty()) {
        continue;
      }
      auto eq = field.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("expected key=value", field_start + 1);
      }
      auto key   = trim(field.substr(0, eq));
      auto value = field.substr(eq + 1);
      if (key == "rank") {
        auto v = trim(value);
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), rank);
        if (ec != std::errc() || ptr != v.data() + v.size() || rank < 0) {
          throw ParseError("malformed rank", field_start + eq + 2);
        }
      } else if (key == "relators") {
        std::size_t rpos = 0;
        while (rpos <= value.size()) {
          std::size_t rend = value.find(',', rpos);
          if (rend == std::string_view::npos) {
            rend = value.size();
          }
          auto r = value.substr(rpos, rend - rpos);
          if (!trim(r).empty()) {
            relator_texts.push_back(r);
            relator_columns.push_back(field_start + eq + 1 + rpos);
          }
          rpos = rend + 1;
        }
      } else {
        throw ParseError("unknown key '" + std::string(key) + "'", field_start + 1);
      }
    }
    if (rank < 0) {
      throw ParseError("missing rank", 1);
    }
    std::vector<Word> relators;
    for (std::size_t i = 0; i < relator_texts.size(); ++i) {
      try {
        relators.push_back(parse_word(relator_texts[i], rank));
      } catch (ParseError const& e) {
        throw ParseError("bad relator: " + e.message(),
                         relator_columns[i] + e.column());
      }
    }
    return Presentation(rank, std::move(relators));
  }

  std::string format_presentation(Presentation const& p) {
    std::string out = "rank=" + std::to_string(p.rank()) + "; relators=";
    for (std::size_t i = 0; i < p.relators().size(); ++i) {
      if (i > 0) {
        out += ',';
      }
      out += format_word(p.relators()[i]);
    }
    return out;
  }

}  // namespace surfsub
