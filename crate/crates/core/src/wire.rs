//! Length-prefixed frames for the interactive protocol.
//!
//! ```text
//! payload length (4 bytes, big-endian) ‖ type (1 byte) ‖ payload
//! ```

use std::io::{self, Read, Write};

use crate::error::{Error, Result};

/// Largest payload accepted; the biggest legitimate message is a response
/// of about 25 kB.
pub const MAX_FRAME: usize = 64 * 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum FrameType {
    Cmt1 = 1,
    Ch1 = 2,
    Cmt2 = 3,
    Ch2 = 4,
    Rsp = 5,
    Result = 6,
    Error = 7,
}

impl FrameType {
    pub fn from_byte(b: u8) -> Option<Self> {
        Some(match b {
            1 => FrameType::Cmt1,
            2 => FrameType::Ch1,
            3 => FrameType::Cmt2,
            4 => FrameType::Ch2,
            5 => FrameType::Rsp,
            6 => FrameType::Result,
            7 => FrameType::Error,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub kind: FrameType,
    pub payload: Vec<u8>,
}

pub fn write_frame<W: Write>(w: &mut W, kind: FrameType, payload: &[u8]) -> Result<()> {
    if payload.len() > MAX_FRAME {
        return Err(Error::Protocol(format!(
            "frame of {} bytes exceeds the maximum",
            payload.len()
        )));
    }
    let mut buf = Vec::with_capacity(5 + payload.len());
    buf.extend_from_slice(&(payload.len() as u32).to_be_bytes());
    buf.push(kind as u8);
    buf.extend_from_slice(payload);
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

/// Reads one frame, refusing payloads over `max` before allocating them.
pub fn read_frame<R: Read>(r: &mut R, max: usize) -> Result<Frame> {
    let mut head = [0u8; 5];
    r.read_exact(&mut head).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => Error::Protocol("connection closed".into()),
        _ => Error::Io(e),
    })?;
    let len = u32::from_be_bytes(head[..4].try_into().unwrap()) as usize;
    let kind = FrameType::from_byte(head[4])
        .ok_or_else(|| Error::Protocol(format!("unknown frame type {}", head[4])))?;
    if len > max {
        return Err(Error::Protocol(format!(
            "frame of {len} bytes exceeds the maximum of {max}"
        )));
    }
    let mut payload = vec![0u8; len];
    r.read_exact(&mut payload)?;
    Ok(Frame { kind, payload })
}

/// Reads a frame and insists on its type; an ERROR frame from the peer is
/// turned into an error carrying its message.
pub fn expect_frame<R: Read>(r: &mut R, kind: FrameType) -> Result<Vec<u8>> {
    let f = read_frame(r, MAX_FRAME)?;
    if f.kind == kind {
        return Ok(f.payload);
    }
    if f.kind == FrameType::Error {
        return Err(Error::Protocol(format!(
            "peer reported: {}",
            String::from_utf8_lossy(&f.payload)
        )));
    }
    Err(Error::Protocol(format!(
        "expected a {kind:?} frame, got {:?}",
        f.kind
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let mut buf = Vec::new();
        write_frame(&mut buf, FrameType::Cmt2, b"abc").unwrap();
        assert_eq!(buf, [0, 0, 0, 3, 3, b'a', b'b', b'c']);
        let f = read_frame(&mut buf.as_slice(), MAX_FRAME).unwrap();
        assert_eq!(
            f,
            Frame {
                kind: FrameType::Cmt2,
                payload: b"abc".to_vec()
            }
        );
    }

    #[test]
    fn rejects_bad_frames() {
        assert!(read_frame(&mut [0u8, 0, 0, 0, 9].as_slice(), MAX_FRAME).is_err());
        assert!(read_frame(&mut [0u8, 1, 0, 1, 1].as_slice(), MAX_FRAME).is_err());
        assert!(read_frame(&mut [0u8, 0, 0, 2, 1, 0].as_slice(), MAX_FRAME).is_err());
        assert!(read_frame(&mut [0u8, 0].as_slice(), MAX_FRAME).is_err());
        assert!(write_frame(&mut Vec::new(), FrameType::Rsp, &vec![0; MAX_FRAME + 1]).is_err());
        let mut buf = Vec::new();
        write_frame(&mut buf, FrameType::Ch1, b"").unwrap();
        assert!(expect_frame(&mut buf.as_slice(), FrameType::Ch2).is_err());
    }
}
