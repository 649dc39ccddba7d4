import { boot } from './app';

const root = document.getElementById('app');
if (root) {
  const apiBase = (import.meta.env.VITE_API_BASE as string | undefined) ?? '';
  boot(root, location.search, { apiBase }).catch((err) => {
    const msg = document.createElement('p');
    msg.id = 'boot-error';
    msg.textContent = `failed to load datasets: ${err}`;
    root.appendChild(msg);
  });
}
