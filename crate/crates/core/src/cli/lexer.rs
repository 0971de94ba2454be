//! Tokens of the model-definition language with 1-based line/column spans.

use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Str(String),
    /// Numeric literal; the source text is kept for integer checks and messages.
    Num(f64, String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Num(_, s) => write!(f, "number `{s}`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Lexical failure: position plus what was found and a description of what would have been valid.
#[derive(Clone, Debug, PartialEq)]
pub struct LexError {
    pub line: usize,
    pub col: usize,
    pub found: String,
    pub expected: String,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, found: String, expected: &str| LexError {
        line,
        col,
        found,
        expected: expected.to_string(),
    };
    while i < chars.len() {
        let ch = chars[i];
        let (l0, c0) = (line, col);
        let single = match ch {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push(Token { tok: t, line, col });
            i += 1;
            col += 1;
        } else if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if ch.is_whitespace() {
            i += 1;
            col += 1;
        } else if ch == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
                col += 1;
            }
        } else if ch == '"' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(err(l0, c0, "unterminated string".into(), "closing `\"`")),
                    Some('"') => {
                        i += 1;
                        col += 1;
                        break;
                    }
                    Some('\\') => match chars.get(i + 1) {
                        Some(e @ ('"' | '\\')) => {
                            s.push(*e);
                            i += 2;
                            col += 2;
                        }
                        other => {
                            let found = other.map_or("end of input".to_string(), |c| format!("`\\{c}`"));
                            return Err(err(line, col, found, "`\\\"` or `\\\\`"));
                        }
                    },
                    Some(&c) => {
                        s.push(c);
                        i += 1;
                        col += 1;
                    }
                }
            }
            out.push(Token { tok: Tok::Str(s), line: l0, col: c0 });
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
        } else if ch.is_ascii_digit() || ch == '-' || ch == '+' || ch == '.' {
            let start = i;
            if ch == '-' || ch == '+' {
                i += 1;
            }
            let digits = |i: &mut usize| {
                let s = *i;
                while *i < chars.len() && chars[*i].is_ascii_digit() {
                    *i += 1;
                }
                *i > s
            };
            let mut any = digits(&mut i);
            if chars.get(i) == Some(&'.') {
                i += 1;
                any |= digits(&mut i);
            }
            if any && matches!(chars.get(i), Some('e' | 'E')) {
                let save = i;
                i += 1;
                if matches!(chars.get(i), Some('-' | '+')) {
                    i += 1;
                }
                if !digits(&mut i) {
                    i = save;
                }
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let value = if any { text.parse::<f64>().ok().filter(|v| v.is_finite()) } else { None };
            match value {
                Some(v) => out.push(Token { tok: Tok::Num(v, text), line: l0, col: c0 }),
                None => return Err(err(l0, c0, format!("`{text}`"), "a finite number")),
            }
        } else {
            return Err(err(line, col, format!("`{ch}`"), "a token"));
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            toks("model \"a b\" { SU(2) -1.5e3 } # c"),
            vec![
                Tok::Ident("model".into()),
                Tok::Str("a b".into()),
                Tok::LBrace,
                Tok::Ident("SU".into()),
                Tok::LParen,
                Tok::Num(2.0, "2".into()),
                Tok::RParen,
                Tok::Num(-1500.0, "-1.5e3".into()),
                Tok::RBrace,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn escapes_and_positions() {
        let t = tokenize("# x\n  \"q\\\"\\\\\" 3").unwrap();
        assert_eq!(t[0].tok, Tok::Str("q\"\\".into()));
        assert_eq!((t[0].line, t[0].col), (2, 3));
        assert_eq!((t[1].line, t[1].col), (2, 11));
    }

    #[test]
    fn errors() {
        let e = tokenize("model\n  @").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        assert!(tokenize("\"open").is_err());
        assert!(tokenize("-").is_err());
        assert!(tokenize("1e999").is_err());
        assert!(tokenize("\"bad \\n\"").is_err());
    }
}
