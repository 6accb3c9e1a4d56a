//! Line-oriented text formats for shifts (`.sft`), automata (`.dfa`) and
//! block codes (`.code`).
//!
//! Every file is a sequence of directives, one per line. `#` starts a
//! comment; blank lines are ignored. Errors carry 1-based line and column.

use std::sync::Arc;

use crate::automata::{BlockCode, Dfa};
use crate::error::{Error, Result};
use crate::shift::ShiftOfFiniteType;
use crate::words::{Alphabet, Word};

struct Token<'a> {
    column: usize,
    text: &'a str,
}

struct Line<'a> {
    number: usize,
    raw: &'a str,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::parse(self.number, column, message)
    }

    fn keyword(&self) -> &Token<'a> {
        &self.tokens[0]
    }

    /// Text after the keyword, with its starting column.
    fn rest(&self) -> (usize, &'a str) {
        match self.tokens.get(1) {
            Some(t) => {
                let start = t.column - 1;
                let end = self.tokens.last().map_or(start, |l| l.column - 1 + l.text.len());
                (t.column, &self.raw[start..end])
            }
            None => (self.keyword().column + self.keyword().text.len(), ""),
        }
    }

    fn args(&self) -> &[Token<'a>] {
        &self.tokens[1..]
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let raw = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, c) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token {
                        column: raw[..s].chars().count() + 1,
                        text: &raw[s..pos],
                    });
                    start = None;
                }
                _ => {}
            }
        }
        (!tokens.is_empty()).then_some(Line {
            number: i + 1,
            raw,
            tokens,
        })
    })
}

fn parse_alphabet(line: &Line<'_>, slot: &mut Option<Arc<Alphabet>>) -> Result<()> {
    if slot.is_some() {
        return Err(line.err(line.keyword().column, "alphabet declared twice"));
    }
    if line.args().is_empty() {
        return Err(line.err(line.rest().0, "alphabet needs at least one symbol"));
    }
    let alphabet = Alphabet::new(line.args().iter().map(|t| t.text))
        .map_err(|e| line.err(line.args()[0].column, strip(e)))?;
    *slot = Some(Arc::new(alphabet));
    Ok(())
}

fn require_alphabet<'s>(line: &Line<'_>, slot: &'s Option<Arc<Alphabet>>) -> Result<&'s Arc<Alphabet>> {
    slot.as_ref()
        .ok_or_else(|| line.err(line.keyword().column, "alphabet must be declared first"))
}

fn parse_word_arg(line: &Line<'_>, alphabet: &Arc<Alphabet>) -> Result<Word> {
    let (column, text) = line.rest();
    let word = alphabet
        .parse_word(text)
        .map_err(|e| line.err(column, strip(e)))?;
    if word.is_empty() {
        return Err(line.err(column, "empty word"));
    }
    Ok(word)
}

fn parse_usize(line: &Line<'_>, token: &Token<'_>, what: &str) -> Result<usize> {
    token
        .text
        .parse()
        .map_err(|_| line.err(token.column, format!("expected {what}, found {:?}", token.text)))
}

fn expect_args(line: &Line<'_>, count: usize) -> Result<()> {
    if line.args().len() != count {
        let (column, _) = line.rest();
        return Err(line.err(
            column,
            format!(
                "{} takes {count} argument(s), found {}",
                line.keyword().text,
                line.args().len()
            ),
        ));
    }
    Ok(())
}

fn unknown(line: &Line<'_>) -> Error {
    line.err(
        line.keyword().column,
        format!("unknown directive {:?}", line.keyword().text),
    )
}

fn strip(e: Error) -> String {
    match e {
        Error::Domain(m) | Error::Resource(m) | Error::Construction(m) => m,
        Error::Parse { message, .. } => message,
    }
}

fn end_of(text: &str) -> (usize, usize) {
    (text.lines().count().max(1), 1)
}

/// ```text
/// alphabet 0 1
/// forbid 11
/// ```
pub fn parse_sft(text: &str) -> Result<ShiftOfFiniteType> {
    let mut alphabet = None;
    let mut forbidden = Vec::new();
    for line in lines(text) {
        match line.keyword().text {
            "alphabet" => parse_alphabet(&line, &mut alphabet)?,
            "forbid" => {
                let a = require_alphabet(&line, &alphabet)?;
                forbidden.push(parse_word_arg(&line, a)?);
            }
            _ => return Err(unknown(&line)),
        }
    }
    let (l, c) = end_of(text);
    let alphabet = alphabet.ok_or_else(|| Error::parse(l, c, "missing alphabet"))?;
    ShiftOfFiniteType::new(alphabet, &forbidden).map_err(|e| Error::parse(l, c, strip(e)))
}

/// ```text
/// alphabet a b
/// states 2
/// trans 0 a 1
/// ```
/// Every (state, symbol) pair needs exactly one `trans` line.
pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let mut alphabet = None;
    let mut states: Option<usize> = None;
    let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
    for line in lines(text) {
        match line.keyword().text {
            "alphabet" => parse_alphabet(&line, &mut alphabet)?,
            "states" => {
                require_alphabet(&line, &alphabet)?;
                if states.is_some() {
                    return Err(line.err(line.keyword().column, "states declared twice"));
                }
                expect_args(&line, 1)?;
                let n = parse_usize(&line, &line.args()[0], "a state count")?;
                if n == 0 {
                    return Err(line.err(line.args()[0].column, "state count must be positive"));
                }
                states = Some(n);
                delta = vec![vec![None; alphabet.as_ref().map_or(0, |a| a.len())]; n];
            }
            "trans" => {
                let a = require_alphabet(&line, &alphabet)?;
                let n = states.ok_or_else(|| {
                    line.err(line.keyword().column, "states must be declared before trans")
                })?;
                expect_args(&line, 3)?;
                let args = line.args();
                let from = parse_usize(&line, &args[0], "a state")?;
                let to = parse_usize(&line, &args[2], "a state")?;
                for (v, t) in [(from, &args[0]), (to, &args[2])] {
                    if v >= n {
                        return Err(line.err(t.column, format!("state {v} out of range 0..{n}")));
                    }
                }
                let sym = a.index_of(args[1].text).ok_or_else(|| {
                    line.err(args[1].column, format!("symbol {:?} not in alphabet", args[1].text))
                })?;
                let slot = &mut delta[from][sym as usize];
                if slot.is_some() {
                    return Err(line.err(
                        line.keyword().column,
                        format!("duplicate transition from {from} on {}", args[1].text),
                    ));
                }
                *slot = Some(to);
            }
            _ => return Err(unknown(&line)),
        }
    }
    let (l, c) = end_of(text);
    let alphabet = alphabet.ok_or_else(|| Error::parse(l, c, "missing alphabet"))?;
    if states.is_none() {
        return Err(Error::parse(l, c, "missing states"));
    }
    let mut table = Vec::with_capacity(delta.len());
    for (q, row) in delta.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (s, t) in row.into_iter().enumerate() {
            out.push(t.ok_or_else(|| {
                Error::parse(
                    l,
                    c,
                    format!(
                        "missing transition from {q} on {}",
                        alphabet.symbol(s as u32).unwrap_or("?")
                    ),
                )
            })?);
        }
        table.push(out);
    }
    Dfa::new(alphabet, table).map_err(|e| Error::parse(l, c, strip(e)))
}

/// ```text
/// alphabet 0 1
/// word 000
/// word 111
/// ```
pub fn parse_code(text: &str) -> Result<BlockCode> {
    let mut alphabet = None;
    let mut words: Vec<Word> = Vec::new();
    for line in lines(text) {
        match line.keyword().text {
            "alphabet" => parse_alphabet(&line, &mut alphabet)?,
            "word" => {
                let a = require_alphabet(&line, &alphabet)?;
                let w = parse_word_arg(&line, a)?;
                if let Some(first) = words.first() {
                    if first.len() != w.len() {
                        return Err(line.err(
                            line.rest().0,
                            format!("codeword length {} differs from {}", w.len(), first.len()),
                        ));
                    }
                }
                if words.contains(&w) {
                    return Err(line.err(line.rest().0, format!("duplicate codeword {w}")));
                }
                words.push(w);
            }
            _ => return Err(unknown(&line)),
        }
    }
    let (l, c) = end_of(text);
    if alphabet.is_none() {
        return Err(Error::parse(l, c, "missing alphabet"));
    }
    BlockCode::new(words).map_err(|e| Error::parse(l, c, strip(e)))
}

fn write_word(w: &Word) -> String {
    w.to_string()
}

pub fn write_sft(sft: &ShiftOfFiniteType) -> String {
    let mut out = format!("alphabet {}\n", sft.alphabet().symbols().join(" "));
    for w in sft.forbidden_words() {
        out.push_str(&format!("forbid {}\n", write_word(&w)));
    }
    out
}

pub fn write_dfa(dfa: &Dfa) -> String {
    let a = dfa.alphabet();
    let mut out = format!("alphabet {}\nstates {}\n", a.symbols().join(" "), dfa.state_count());
    for (q, row) in dfa.transitions().iter().enumerate() {
        for (s, t) in row.iter().enumerate() {
            out.push_str(&format!("trans {q} {} {t}\n", a.symbols()[s]));
        }
    }
    out
}

pub fn write_code(code: &BlockCode) -> String {
    let a = code.codewords()[0].alphabet();
    let mut out = format!("alphabet {}\n", a.symbols().join(" "));
    for w in code.codewords() {
        out.push_str(&format!("word {}\n", write_word(w)));
    }
    out
}
