//! Paged retrieval interface for platform clients. Only a replay adapter
//! backed by already loaded records ships here.

use collabkit_core::corpus::{CommentRecord, VideoRecord};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("invalid page token {0:?}")]
    BadToken(String),
    #[error("{0}")]
    Backend(String),
}

/// One page of results and the token for the next page, if any.
pub type Page<T> = (Vec<T>, Option<String>);

pub trait FetchAdapter {
    fn list_videos(&self, channel_id: &str, page_token: Option<&str>) -> Result<Page<VideoRecord>, FetchError>;
    fn list_comments(&self, video_id: &str, page_token: Option<&str>) -> Result<Page<CommentRecord>, FetchError>;
}

/// Drains every page for one key.
pub fn fetch_all<T>(
    mut next: impl FnMut(Option<&str>) -> Result<Page<T>, FetchError>,
) -> Result<Vec<T>, FetchError> {
    let mut out = Vec::new();
    let mut token: Option<String> = None;
    loop {
        let (mut page, following) = next(token.as_deref())?;
        out.append(&mut page);
        match following {
            Some(t) => token = Some(t),
            None => return Ok(out),
        }
    }
}

/// Serves records from memory in fixed-size pages. Tokens are decimal
/// offsets.
#[derive(Debug, Clone)]
pub struct ReplayAdapter {
    videos: Vec<VideoRecord>,
    comments: Vec<CommentRecord>,
    page_size: usize,
}

impl ReplayAdapter {
    pub fn new(videos: Vec<VideoRecord>, comments: Vec<CommentRecord>, page_size: usize) -> Self {
        Self { videos, comments, page_size: page_size.max(1) }
    }

    fn page<T: Clone>(&self, items: Vec<&T>, token: Option<&str>) -> Result<Page<T>, FetchError> {
        let start = match token {
            None => 0,
            Some(t) => t.parse::<usize>().map_err(|_| FetchError::BadToken(t.to_string()))?,
        };
        if start > items.len() {
            return Err(FetchError::BadToken(start.to_string()));
        }
        let end = (start + self.page_size).min(items.len());
        let next = (end < items.len()).then(|| end.to_string());
        Ok((items[start..end].iter().map(|x| (*x).clone()).collect(), next))
    }
}

impl FetchAdapter for ReplayAdapter {
    fn list_videos(&self, channel_id: &str, page_token: Option<&str>) -> Result<Page<VideoRecord>, FetchError> {
        self.page(self.videos.iter().filter(|v| v.channel_id == channel_id).collect(), page_token)
    }

    fn list_comments(&self, video_id: &str, page_token: Option<&str>) -> Result<Page<CommentRecord>, FetchError> {
        self.page(self.comments.iter().filter(|c| c.video_id == video_id).collect(), page_token)
    }
}
